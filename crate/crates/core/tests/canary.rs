//! The learners must depend on oracle answers and nothing else: corrupting
//! one closure entry has to change what they output.

use std::collections::BTreeSet;

use pql::bench::{run_on_oracle, Alg};
use pql::dag_learn::LearnerConfig;
use pql::generators::{gen_almost_tree, gen_rooted_tree, GenSpec};
use pql::graph::{Digraph, ReachabilityIndex};
use pql::oracle::ReachabilityOracle;

fn learned(alg: Alg, index: ReachabilityIndex, d: usize) -> Option<BTreeSet<pql::graph::Edge>> {
    let o = ReachabilityOracle::new(index);
    run_on_oracle(alg, &o, &LearnerConfig::new(d).with_seed(1), None)
        .ok()
        .map(|out| out.edges.into_iter().collect())
}

/// Drops the closure entry of one tree edge whose head is a leaf.
fn corrupt_leaf_edge(g: &Digraph, index: &mut ReachabilityIndex) {
    let (p, leaf) = g.edges().find(|&(_, b)| g.out_degree(b) == 0).expect("trees have leaves");
    index.set(p, leaf, false);
}

#[test]
fn short_tree_sees_a_corrupted_entry() {
    let g = gen_rooted_tree(&GenSpec::new(200, 3, 10, 4)).unwrap();
    let clean = ReachabilityIndex::build(&g);
    assert_eq!(learned(Alg::ShortTree, clean.clone(), 3), Some(g.edge_set()));

    let mut bad = clean;
    corrupt_leaf_edge(&g, &mut bad);
    assert_ne!(learned(Alg::ShortTree, bad, 3), Some(g.edge_set()));
}

#[test]
fn brute_force_and_almost_tree_see_a_corrupted_entry() {
    let g = gen_almost_tree(&GenSpec::new(300, 3, 12, 8)).unwrap();
    let clean = ReachabilityIndex::build(&g);
    for alg in [Alg::BruteForce, Alg::AlmostTree] {
        assert_eq!(learned(alg, clean.clone(), 3), Some(g.edge_set()), "{alg}");
        let mut bad = clean.clone();
        corrupt_leaf_edge(&g, &mut bad);
        assert_ne!(learned(alg, bad, 3), Some(g.edge_set()), "{alg}");
    }
}
