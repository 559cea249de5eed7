//! Learners for multitrees (peel one root's tree at a time) and butterfly
//! networks (sampled forward and inverse trees).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dag_learn::{bernoulli_sample, learn_root, learn_spanning_tree, LearnRng, LearnerConfig};
use crate::error::LearnError;
use crate::generators::butterfly_depth;
use crate::graph::{Edge, VertexId};
use crate::oracle::{InverseOracle, LedgerSnapshot, PathOracle, RestrictedOracle};
use crate::tree_learn::{learn_short_tree, sequential_find_root, LearnResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultitreeResult {
    pub edges: Vec<Edge>,
    pub roots: Vec<VertexId>,
    pub per_root_trees: BTreeMap<VertexId, Vec<Edge>>,
    pub ledger: LedgerSnapshot,
}

impl MultitreeResult {
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }
}

/// Repeatedly finds a root among the uncovered vertices, learns the tree it
/// reaches, and marks that tree covered.
pub fn learn_multitree(
    vs: &[VertexId],
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<MultitreeResult, LearnError> {
    let tree_cfg = LearnerConfig { c_paths: 1, ..*cfg };
    let mut remaining: BTreeSet<VertexId> = vs.iter().copied().collect();
    let mut per_root_trees = BTreeMap::new();
    let mut roots = Vec::new();
    while !remaining.is_empty() {
        let rs: Vec<VertexId> = remaining.iter().copied().collect();
        let r = learn_root(&rs, oracle, cfg, rng)?;
        if !remaining.contains(&r) {
            return Err(LearnError::RootNotProgressing(r));
        }
        let mut tree_vs = oracle.descendants_in(r, vs)?;
        tree_vs.push(r);
        let scoped = RestrictedOracle::new(oracle, tree_vs.iter().copied());
        let edges = learn_spanning_tree(&tree_vs, r, &scoped, &tree_cfg, rng)?;
        for x in &tree_vs {
            remaining.remove(x);
        }
        roots.push(r);
        per_root_trees.insert(r, edges);
    }
    let edges: BTreeSet<Edge> = per_root_trees.values().flatten().copied().collect();
    Ok(MultitreeResult {
        edges: edges.into_iter().collect(),
        roots,
        per_root_trees,
        ledger: oracle.ledger().snapshot(),
    })
}

/// Finds a root by learning the inverted tree of ancestors of the lowest-id
/// vertex; its lowest-id leaf has no ancestors.
pub fn learn_root_via_inverse_tree(
    vs: &[VertexId],
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<VertexId, LearnError> {
    let v = *vs.iter().min().ok_or(LearnError::EmptyVertexSet)?;
    let mut up = oracle.ancestors_in(v, vs)?;
    if up.is_empty() {
        return Ok(v);
    }
    up.push(v);
    let inv = InverseOracle::new(oracle);
    let edges = learn_spanning_tree(&up, v, &inv, &LearnerConfig { c_paths: 1, ..*cfg }, rng)?;
    let parents: BTreeSet<VertexId> = edges.iter().map(|&(a, _)| a).collect();
    up.into_iter()
        .filter(|x| !parents.contains(x))
        .min()
        .ok_or_else(|| LearnError::PreconditionViolated("inverse tree has no leaf".into()))
}

/// Learns a butterfly network whose vertex count is `2^h (h + 1)`.
///
/// One forward tree from a source exposes every sink and one inverse tree
/// from a sink exposes every source. Forward trees from a sample of sources
/// and inverse trees from a sample of sinks then cover every edge w.h.p.
pub fn learn_butterfly(
    vs: &[VertexId],
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<LearnResult, LearnError> {
    const FANOUT: usize = 4;
    let h = butterfly_depth(vs.len()).ok_or(LearnError::NotButterflyCardinality(vs.len()))?;
    if h == 0 {
        return Ok(LearnResult::new([], None, oracle));
    }
    let ledger = oracle.ledger();
    let inv = InverseOracle::new(oracle);

    let (sinks, sources) = {
        let _p = ledger.phase("boundary");
        let r = sequential_find_root(vs, oracle)?;
        let mut down = oracle.descendants_in(r, vs)?;
        down.push(r);
        let forward = learn_short_tree(&down, r, FANOUT, oracle)?;
        let sinks = leaves(&down, &forward);
        let l = sinks[0];
        let mut up = oracle.ancestors_in(l, vs)?;
        up.push(l);
        let backward = learn_short_tree(&up, l, FANOUT, &inv)?;
        (sinks, leaves(&up, &backward))
    };

    let m = cfg.butterfly_c * 2f64.powf(h as f64 / 2.0) * h.max(1) as f64;
    let ss = bernoulli_sample(&sources, m, rng);
    let ts = bernoulli_sample(&sinks, m, rng);

    let _p = ledger.phase("sampled_trees");
    // D(s) and A(t) for every sample in one round.
    let mut pairs = Vec::with_capacity((ss.len() + ts.len()) * vs.len());
    for &s in &ss {
        pairs.extend(vs.iter().filter(|&&x| x != s).map(|&x| (s, x)));
    }
    for &t in &ts {
        pairs.extend(vs.iter().filter(|&&x| x != t).map(|&x| (x, t)));
    }
    let answers = if pairs.is_empty() { Vec::new() } else { oracle.batch(&pairs)? };
    let mut reach = answers.chunks(vs.len() - 1).zip(ss.iter().chain(&ts)).map(|(hits, &c)| {
        let mut set: Vec<VertexId> = pairs_of(vs, c).zip(hits).filter_map(|(x, &b)| b.then_some(x)).collect();
        set.push(c);
        set
    });
    let down_sets: Vec<Vec<VertexId>> = reach.by_ref().take(ss.len()).collect();
    let up_sets: Vec<Vec<VertexId>> = reach.collect();

    type Branch<'b> = Box<dyn FnOnce() -> Result<Vec<Edge>, LearnError> + 'b>;
    let inv = &inv;
    let forward = ss
        .iter()
        .zip(&down_sets)
        .map(|(&s, set)| Box::new(move || learn_short_tree(set, s, FANOUT, oracle)) as Branch<'_>);
    let backward = ts.iter().zip(&up_sets).map(|(&t, set)| {
        Box::new(move || {
            learn_short_tree(set, t, FANOUT, inv).map(|es| es.into_iter().map(|(a, b)| (b, a)).collect())
        }) as Branch<'_>
    });
    let trees = ledger.fork_join(forward.chain(backward));
    let mut edges = BTreeSet::new();
    for tree in trees {
        edges.extend(tree?);
    }
    Ok(LearnResult::new(edges, None, oracle))
}

fn pairs_of(vs: &[VertexId], c: VertexId) -> impl Iterator<Item = VertexId> + '_ {
    vs.iter().copied().filter(move |&x| x != c)
}

/// Vertices of `vs` with no outgoing edge in `edges`, ascending.
fn leaves(vs: &[VertexId], edges: &[Edge]) -> Vec<VertexId> {
    let parents: BTreeSet<VertexId> = edges.iter().map(|&(a, _)| a).collect();
    let mut out: Vec<VertexId> = vs.iter().copied().filter(|x| !parents.contains(x)).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_butterfly, gen_butterfly_shuffled, gen_multitree, rng_from_seed, GenSpec};
    use crate::graph::{v, Digraph};
    use crate::oracle::ReachabilityOracle;

    fn all(n: usize) -> Vec<VertexId> {
        (0..n).map(v).collect()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> Digraph {
        Digraph::from_edges(n, edges.iter().map(|&(a, b)| (v(a), v(b)))).unwrap()
    }

    #[test]
    fn two_roots_share_a_subtree() {
        // roots 0 and 1 both reach 2, which has children 3 and 4
        let g = graph(6, &[(0, 2), (1, 2), (2, 3), (2, 4), (1, 5)]);
        let o = ReachabilityOracle::from_graph(&g);
        let mut rng = rng_from_seed(0);
        let res = learn_multitree(&all(6), &o, &LearnerConfig::new(3), &mut rng).unwrap();
        assert_eq!(res.edge_set(), g.edge_set());
        assert_eq!(res.roots, vec![v(0), v(1)]);
        assert!(res.per_root_trees[&v(0)].contains(&(v(2), v(3))));
        assert!(res.per_root_trees[&v(1)].contains(&(v(2), v(3))));
    }

    #[test]
    fn generated_multitrees() {
        for seed in 0..10 {
            let g = gen_multitree(&GenSpec::new(200, 4, 12, seed).with_roots(4)).unwrap();
            let o = ReachabilityOracle::from_graph(&g);
            let mut rng = rng_from_seed(seed);
            let res = learn_multitree(&all(200), &o, &LearnerConfig::new(4), &mut rng).unwrap();
            assert_eq!(res.edge_set(), g.edge_set(), "seed {seed}");
            let mut roots = res.roots.clone();
            roots.sort_unstable();
            assert_eq!(roots, g.roots());
        }
    }

    #[test]
    fn inverse_tree_root() {
        let o = ReachabilityOracle::from_graph(&graph(3, &[(2, 1), (1, 0)]));
        let mut rng = rng_from_seed(0);
        let cfg = LearnerConfig::new(3);
        assert_eq!(learn_root_via_inverse_tree(&all(3), &o, &cfg, &mut rng).unwrap(), v(2));

        let o = ReachabilityOracle::from_graph(&graph(4, &[(0, 2), (3, 1), (1, 2)]));
        assert_eq!(learn_root_via_inverse_tree(&all(4), &o, &cfg, &mut rng).unwrap(), v(0));

        // 0 has ancestors from roots 2 and 3
        let g = graph(5, &[(2, 4), (4, 0), (3, 0), (1, 4)]);
        let o = ReachabilityOracle::from_graph(&g);
        let r = learn_root_via_inverse_tree(&all(5), &o, &cfg, &mut rng).unwrap();
        assert_eq!(r, v(1));
        assert_eq!(g.in_degree(r), 0);
    }

    #[test]
    fn butterfly_small_cases() {
        let g = gen_butterfly(1);
        let o = ReachabilityOracle::from_graph(&g);
        let mut rng = rng_from_seed(0);
        let res = learn_butterfly(&all(4), &o, &LearnerConfig::new(4), &mut rng).unwrap();
        assert_eq!(res.edge_set(), g.edge_set());

        for seed in 0..5 {
            let g = gen_butterfly_shuffled(4, seed);
            let o = ReachabilityOracle::from_graph(&g);
            let mut rng = rng_from_seed(seed);
            let res = learn_butterfly(&all(80), &o, &LearnerConfig::new(4), &mut rng).unwrap();
            assert_eq!(res.edge_set(), g.edge_set(), "seed {seed}");
        }
    }

    #[test]
    fn butterfly_rejects_bad_sizes() {
        let o = ReachabilityOracle::from_graph(&Digraph::new(5));
        let mut rng = rng_from_seed(0);
        assert_eq!(
            learn_butterfly(&all(5), &o, &LearnerConfig::new(4), &mut rng),
            Err(LearnError::NotButterflyCardinality(5))
        );
    }
}
