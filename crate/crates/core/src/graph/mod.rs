//! Ground-truth graph representation.
//!
//! A [`Digraph`] is the hidden graph that learners try to reconstruct. It is
//! only ever handed to learners indirectly, through an oracle built on its
//! [`ReachabilityIndex`].

mod arborescence;
mod classify;
pub mod io;
mod reach;
mod undirected;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use arborescence::ArborescenceMetrics;
pub use classify::{classify, classify_with_cap, GraphClassReport, PATH_COUNT_CAP};
pub use reach::{transitive_reduction, ReachabilityIndex};
pub use undirected::{undirected, UndirectedEdge, UndirectedTree};

/// Dense vertex index, `0 <= id < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn new(index: usize) -> Self {
        VertexId(u32::try_from(index).expect("vertex index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(index: usize) -> Self {
        VertexId::new(index)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Directed edge `(tail, head)`.
pub type Edge = (VertexId, VertexId);

/// Shorthand used heavily in tests and examples.
#[inline]
pub fn v(index: usize) -> VertexId {
    VertexId::new(index)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph contains a directed cycle")]
    CyclicGraph,
    #[error("edge set is not an arborescence: {0}")]
    NotArborescence(String),
    #[error("malformed graph file: {0}")]
    Format(String),
}

/// Simple directed graph on vertices `0..n`, no self-loops, no parallel edges.
///
/// Adjacency lists are kept sorted so iteration order is deterministic.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(u32, u32)> = self.edges().map(|(a, b)| (a.0, b.0)).collect();
        write!(f, "Digraph {{ n: {}, edges: {:?} }}", self.vertex_count(), edges)
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Digraph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, from: VertexId, to: VertexId) -> Result<(), GraphError> {
        self.check(from)?;
        self.check(to)?;
        if from == to {
            return Err(GraphError::SelfLoop(from));
        }
        let out = &mut self.out_adj[from.index()];
        match out.binary_search(&to) {
            Ok(_) => return Err(GraphError::DuplicateEdge(from, to)),
            Err(pos) => out.insert(pos, to),
        }
        let inn = &mut self.in_adj[to.index()];
        let pos = inn.binary_search(&from).unwrap_err();
        inn.insert(pos, from);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, from: VertexId, to: VertexId) -> bool {
        if from.index() >= self.vertex_count() || to.index() >= self.vertex_count() {
            return false;
        }
        let out = &mut self.out_adj[from.index()];
        let Ok(pos) = out.binary_search(&to) else {
            return false;
        };
        out.remove(pos);
        let inn = &mut self.in_adj[to.index()];
        let pos = inn.binary_search(&from).expect("adjacency lists out of sync");
        inn.remove(pos);
        self.edge_count -= 1;
        true
    }

    fn check(&self, x: VertexId) -> Result<(), GraphError> {
        if x.index() < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: x,
                n: self.vertex_count(),
            })
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId::new)
    }

    /// Edges in lexicographic `(tail, head)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(a, outs)| outs.iter().map(move |&b| (VertexId::new(a), b)))
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn has_edge(&self, from: VertexId, to: VertexId) -> bool {
        self.out_adj
            .get(from.index())
            .is_some_and(|outs| outs.binary_search(&to).is_ok())
    }

    #[inline]
    pub fn out_neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.out_adj[x.index()]
    }

    #[inline]
    pub fn in_neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.in_adj[x.index()]
    }

    #[inline]
    pub fn out_degree(&self, x: VertexId) -> usize {
        self.out_adj[x.index()].len()
    }

    #[inline]
    pub fn in_degree(&self, x: VertexId) -> usize {
        self.in_adj[x.index()].len()
    }

    /// Total degree `d_i + d_o`.
    #[inline]
    pub fn degree(&self, x: VertexId) -> usize {
        self.in_degree(x) + self.out_degree(x)
    }

    /// Vertices with in-degree zero, ascending.
    pub fn roots(&self) -> Vec<VertexId> {
        self.vertices().filter(|&x| self.in_degree(x) == 0).collect()
    }

    /// Kahn's algorithm; `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut indeg: Vec<usize> = (0..n).map(|i| self.in_adj[i].len()).collect();
        let mut queue: VecDeque<VertexId> = self.vertices().filter(|x| indeg[x.index()] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in self.out_neighbors(x) {
                indeg[y.index()] -= 1;
                if indeg[y.index()] == 0 {
                    queue.push_back(y);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_dag(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Same graph with every edge reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
            edge_count: self.edge_count,
        }
    }

    /// Renames vertex `x` to `perm[x]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[VertexId]) -> Digraph {
        assert_eq!(perm.len(), self.vertex_count(), "permutation length mismatch");
        let mut g = Digraph::new(self.vertex_count());
        for (a, b) in self.edges() {
            g.add_edge(perm[a.index()], perm[b.index()])
                .expect("relabel requires a permutation");
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let mut g = Digraph::new(3);
        assert_eq!(g.add_edge(v(1), v(1)), Err(GraphError::SelfLoop(v(1))));
        g.add_edge(v(0), v(1)).unwrap();
        assert_eq!(g.add_edge(v(0), v(1)), Err(GraphError::DuplicateEdge(v(0), v(1))));
        assert!(matches!(g.add_edge(v(0), v(3)), Err(GraphError::VertexOutOfRange { .. })));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn adjacency_stays_consistent() {
        let g = Digraph::from_edges(4, [(v(2), v(3)), (v(0), v(2)), (v(0), v(1)), (v(1), v(3))]).unwrap();
        assert_eq!(g.out_neighbors(v(0)), &[v(1), v(2)]);
        assert_eq!(g.in_neighbors(v(3)), &[v(1), v(2)]);
        assert_eq!(g.roots(), vec![v(0)]);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(v(0), v(1)), (v(0), v(2)), (v(1), v(3)), (v(2), v(3))]);
        for (a, b) in g.edges() {
            assert!(g.in_neighbors(b).contains(&a));
        }
    }

    #[test]
    fn topological_order_detects_cycles() {
        let dag = Digraph::from_edges(3, [(v(0), v(1)), (v(1), v(2))]).unwrap();
        assert_eq!(dag.topological_order(), Some(vec![v(0), v(1), v(2)]));
        let cyc = Digraph::from_edges(3, [(v(0), v(1)), (v(1), v(2)), (v(2), v(0))]).unwrap();
        assert!(cyc.topological_order().is_none());
    }

    #[test]
    fn remove_edge_updates_both_sides() {
        let mut g = Digraph::from_edges(3, [(v(0), v(1)), (v(1), v(2))]).unwrap();
        assert!(g.remove_edge(v(0), v(1)));
        assert!(!g.remove_edge(v(0), v(1)));
        assert_eq!(g.in_degree(v(1)), 0);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn relabel_and_reverse() {
        let g = Digraph::from_edges(3, [(v(0), v(1)), (v(1), v(2))]).unwrap();
        let h = g.relabel(&[v(2), v(0), v(1)]);
        assert_eq!(h.edge_set(), [(v(2), v(0)), (v(0), v(1))].into_iter().collect());
        let r = g.reversed();
        assert!(r.has_edge(v(1), v(0)) && r.has_edge(v(2), v(1)));
    }
}
