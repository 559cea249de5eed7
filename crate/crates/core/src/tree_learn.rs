//! Deterministic learners: sequential root finding, the height-bounded tree
//! learner, the brute-force baseline, and the separator-query reduction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::LearnError;
use crate::graph::{transitive_reduction, undirected, Digraph, Edge, UndirectedEdge, VertexId};
use crate::oracle::{LedgerSnapshot, PathOracle, SepPathAdapter, SeparatorOracle};

/// Learned edges (sorted, no duplicates), the root when one is known, and
/// the ledger as it stood when the learner returned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnResult {
    pub edges: Vec<Edge>,
    pub root: Option<VertexId>,
    pub ledger: LedgerSnapshot,
}

impl LearnResult {
    pub fn new(edges: impl IntoIterator<Item = Edge>, root: Option<VertexId>, oracle: &dyn PathOracle) -> Self {
        let set: BTreeSet<Edge> = edges.into_iter().collect();
        LearnResult {
            edges: set.into_iter().collect(),
            root,
            ledger: oracle.ledger().snapshot(),
        }
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }
}

/// Walks `vs` keeping a current vertex and moving to any vertex that reaches
/// it. Ends on a vertex with no ancestor in `vs`; exactly `|vs| - 1` queries.
pub fn sequential_find_root(vs: &[VertexId], oracle: &dyn PathOracle) -> Result<VertexId, LearnError> {
    let (&first, rest) = vs.split_first().ok_or(LearnError::EmptyVertexSet)?;
    let mut x = first;
    for &y in rest {
        if oracle.query(y, x)? {
            x = y;
        }
    }
    Ok(x)
}

/// Learns the tree hanging from `root` whose vertex set is exactly `vs`
/// (`root` may or may not be listed). Each vertex has at most `d` children.
///
/// For every node: find a child by a sequential minimum-ancestor scan over
/// the unassigned vertices, collect its subtree with one batch, repeat.
pub fn learn_short_tree(
    vs: &[VertexId],
    root: VertexId,
    d: usize,
    oracle: &dyn PathOracle,
) -> Result<Vec<Edge>, LearnError> {
    let mut edges = Vec::with_capacity(vs.len().saturating_sub(1));
    let mut rest: Vec<VertexId> = vs.iter().copied().filter(|&x| x != root).collect();
    rest.sort_unstable();
    rest.dedup();
    let mut work = vec![(root, rest)];
    while let Some((r, mut rest)) = work.pop() {
        for _ in 0..d {
            if rest.is_empty() {
                break;
            }
            let mut child = rest[0];
            for &x in &rest[1..] {
                if oracle.query(x, child)? {
                    child = x;
                }
            }
            let below = oracle.descendants_in(child, &rest)?;
            let below: BTreeSet<VertexId> = below.into_iter().collect();
            edges.push((r, child));
            rest.retain(|x| *x != child && !below.contains(x));
            work.push((child, below.into_iter().collect()));
        }
        if !rest.is_empty() {
            return Err(LearnError::PreconditionViolated(format!(
                "vertex {r} has more than {d} children ({} vertices left unassigned)",
                rest.len()
            )));
        }
    }
    Ok(edges)
}

/// Queries every ordered pair in `vs` in one batch and returns the
/// transitive reduction of the observed relation.
pub fn brute_force_learn(vs: &[VertexId], oracle: &dyn PathOracle) -> Result<Vec<Edge>, LearnError> {
    let k = vs.len();
    if k < 2 {
        return Ok(Vec::new());
    }
    let pairs: Vec<(VertexId, VertexId)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (vs[i], vs[j])))
        .collect();
    let answers = oracle.batch(&pairs)?;
    let mut local = Digraph::new(k);
    let mut it = answers.into_iter();
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            if it.next().expect("one answer per pair") {
                local.add_edge(VertexId::new(i), VertexId::new(j)).expect("distinct pair");
            }
        }
    }
    let reduced = transitive_reduction(&local)
        .map_err(|_| LearnError::PreconditionViolated("observed relation is cyclic".into()))?;
    Ok(reduced.edges().map(|(a, b)| (vs[a.index()], vs[b.index()])).collect())
}

/// Rooted learner used behind the separator reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UndirectedMethod {
    /// `learn_short_tree` with the given child bound.
    ShortTree { d: usize },
    /// The randomized arborescence learner with the given config and seed.
    SpanningTree(crate::dag_learn::LearnerConfig),
}

/// Learns an undirected tree on `0..n` from separator queries: root it at
/// vertex 0, answer path queries through `sep(0, u, v)`, learn the rooted
/// tree, drop directions.
pub fn learn_undirected_tree(
    sep: &dyn SeparatorOracle,
    method: UndirectedMethod,
) -> Result<BTreeSet<UndirectedEdge>, LearnError> {
    let n = sep.vertex_count();
    if n == 0 {
        return Err(LearnError::EmptyVertexSet);
    }
    let root = VertexId(0);
    let oracle = SepPathAdapter::new(sep, root);
    let vs: Vec<VertexId> = (0..n).map(VertexId::new).collect();
    let edges = match method {
        UndirectedMethod::ShortTree { d } => learn_short_tree(&vs, root, d, &oracle)?,
        UndirectedMethod::SpanningTree(cfg) => {
            let mut rng = crate::generators::rng_from_seed(cfg.seed);
            crate::dag_learn::learn_spanning_tree(&vs, root, &oracle, &cfg, &mut rng)?
        }
    };
    Ok(edges.into_iter().map(|(a, b)| undirected(a, b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{v, UndirectedTree};
    use crate::oracle::{InverseOracle, ReachabilityOracle, TreeSeparatorOracle};

    fn oracle(n: usize, edges: &[(usize, usize)]) -> ReachabilityOracle {
        ReachabilityOracle::from_graph(&Digraph::from_edges(n, edges.iter().map(|&(a, b)| (v(a), v(b)))).unwrap())
    }

    fn all(n: usize) -> Vec<VertexId> {
        (0..n).map(v).collect()
    }

    fn set(edges: &[(usize, usize)]) -> BTreeSet<Edge> {
        edges.iter().map(|&(a, b)| (v(a), v(b))).collect()
    }

    #[test]
    fn find_root_on_chain_and_singleton() {
        // 0 -> 1 -> 2 with the walk starting at 2
        let o = oracle(3, &[(0, 1), (1, 2)]);
        assert_eq!(sequential_find_root(&[v(2), v(1), v(0)], &o).unwrap(), v(0));
        assert_eq!(o.ledger().queries(), 2);
        assert_eq!(sequential_find_root(&[v(1)], &o).unwrap(), v(1));
        assert_eq!(o.ledger().queries(), 2);
        assert_eq!(sequential_find_root(&[], &o), Err(LearnError::EmptyVertexSet));
    }

    #[test]
    fn short_tree_star_path_cbt() {
        let star = [(0, 1), (0, 2), (0, 3)];
        let o = oracle(4, &star);
        let e: BTreeSet<_> = learn_short_tree(&all(4), v(0), 3, &o).unwrap().into_iter().collect();
        assert_eq!(e, set(&star));

        let path = [(0, 1), (1, 2)];
        let o = oracle(3, &path);
        let e: BTreeSet<_> = learn_short_tree(&all(3), v(0), 2, &o).unwrap().into_iter().collect();
        assert_eq!(e, set(&path));

        let cbt: Vec<(usize, usize)> = (1..7).map(|i| ((i - 1) / 2, i)).collect();
        let o = oracle(7, &cbt);
        let e: BTreeSet<_> = learn_short_tree(&all(7), v(0), 3, &o).unwrap().into_iter().collect();
        let brute: BTreeSet<_> = brute_force_learn(&all(7), &oracle(7, &cbt)).unwrap().into_iter().collect();
        assert_eq!(e, brute);
        assert_eq!(e, set(&cbt));
    }

    #[test]
    fn short_tree_flags_too_many_children() {
        let o = oracle(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(matches!(
            learn_short_tree(&all(4), v(0), 2, &o),
            Err(LearnError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn short_tree_over_inverse_butterfly() {
        // F^1: sources 0, 1; sinks 2, 3
        let o = oracle(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        let inv = InverseOracle::new(&o);
        let e: BTreeSet<_> = learn_short_tree(&[v(2), v(0), v(1)], v(2), 4, &inv).unwrap().into_iter().collect();
        assert_eq!(e, set(&[(2, 0), (2, 1)]));
    }

    #[test]
    fn brute_force_reduces_triangle() {
        let o = oracle(3, &[(0, 1), (1, 2), (0, 2)]);
        let e: BTreeSet<_> = brute_force_learn(&all(3), &o).unwrap().into_iter().collect();
        assert_eq!(e, set(&[(0, 1), (1, 2)]));
        assert_eq!(o.ledger().rounds(), 1);
    }

    #[test]
    fn undirected_path_and_star() {
        for order in [[0, 1, 2], [1, 0, 2], [2, 1, 0]] {
            // path with vertex `order[1]` in the middle
            let t = UndirectedTree::from_edges(3, [(v(order[0]), v(order[1])), (v(order[1]), v(order[2]))]).unwrap();
            let sep = TreeSeparatorOracle::new(&t);
            let got = learn_undirected_tree(&sep, UndirectedMethod::ShortTree { d: 2 }).unwrap();
            assert_eq!(got, t.edges());
        }
        let star = UndirectedTree::from_edges(4, [(v(3), v(0)), (v(3), v(1)), (v(3), v(2))]).unwrap();
        let sep = TreeSeparatorOracle::new(&star);
        assert_eq!(learn_undirected_tree(&sep, UndirectedMethod::ShortTree { d: 3 }).unwrap(), star.edges());
    }
}
