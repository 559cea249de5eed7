use fixedbitset::FixedBitSet;

use super::{Digraph, GraphError, VertexId};

/// Transitive closure as one bitset row per vertex.
///
/// `reaches(u, v)` is true iff a directed path of length at least one leads
/// from `u` to `v`. The diagonal is always false, even on cyclic graphs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReachabilityIndex {
    rows: Vec<FixedBitSet>,
}

impl ReachabilityIndex {
    /// Closure of an arbitrary digraph, by one BFS per vertex.
    pub fn build(g: &Digraph) -> Self {
        let n = g.vertex_count();
        let mut rows = Vec::with_capacity(n);
        let mut stack = Vec::new();
        for u in g.vertices() {
            let mut seen = FixedBitSet::with_capacity(n);
            stack.extend_from_slice(g.out_neighbors(u));
            while let Some(x) = stack.pop() {
                if seen.put(x.index()) {
                    continue;
                }
                stack.extend(g.out_neighbors(x).iter().filter(|y| !seen.contains(y.index())));
            }
            seen.set(u.index(), false);
            rows.push(seen);
        }
        ReachabilityIndex { rows }
    }

    /// Closure of a DAG by dynamic programming in reverse topological order.
    pub fn build_dag(g: &Digraph) -> Result<Self, GraphError> {
        let order = g.topological_order().ok_or(GraphError::CyclicGraph)?;
        let n = g.vertex_count();
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for &u in order.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            for &c in g.out_neighbors(u) {
                row.insert(c.index());
                row.union_with(&rows[c.index()]);
            }
            rows[u.index()] = row;
        }
        Ok(ReachabilityIndex { rows })
    }

    /// Empty closure on `n` vertices; rows are filled with [`set`](Self::set).
    pub fn empty(n: usize) -> Self {
        ReachabilityIndex {
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn reaches(&self, from: VertexId, to: VertexId) -> bool {
        self.rows[from.index()].contains(to.index())
    }

    /// Overwrites a single answer. Only meant for building fixtures and for
    /// corrupting an index on purpose in tests.
    pub fn set(&mut self, from: VertexId, to: VertexId, value: bool) {
        self.rows[from.index()].set(to.index(), value);
    }

    pub fn row(&self, from: VertexId) -> &FixedBitSet {
        &self.rows[from.index()]
    }

    /// Strict descendants of `from`, ascending.
    pub fn descendants(&self, from: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rows[from.index()].ones().map(VertexId::new)
    }

    pub fn descendant_count(&self, from: VertexId) -> usize {
        self.rows[from.index()].count_ones(..)
    }

    /// Strict ancestors of `to`, ascending. Linear in `n`.
    pub fn ancestors(&self, to: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.rows.len())
            .filter(move |&u| self.rows[u].contains(to.index()))
            .map(VertexId::new)
    }
}

/// Removes every transitive edge: `(u, v)` is dropped iff some other child of
/// `u` reaches `v`. Unique for DAGs.
pub fn transitive_reduction(g: &Digraph) -> Result<Digraph, GraphError> {
    let reach = ReachabilityIndex::build_dag(g)?;
    let mut out = Digraph::new(g.vertex_count());
    for (a, b) in g.edges() {
        let transitive = g
            .out_neighbors(a)
            .iter()
            .any(|&c| c != b && reach.reaches(c, b));
        if !transitive {
            out.add_edge(a, b)?;
        }
    }
    Ok(out)
}
