use std::collections::BTreeSet;

use proptest::prelude::*;
use pql::bench::{run_learner, Alg};
use pql::dag_learn::LearnerConfig;
use pql::generators::{gen_almost_tree, gen_rooted_tree, max_tree_size, GenSpec};
use pql::graph::{transitive_reduction, v, ArborescenceMetrics, Digraph, ReachabilityIndex};
use pql::oracle::ReachabilityOracle;
use pql::tree_learn::brute_force_learn;

/// Random DAG on `0..n`: every edge points from a lower to a higher id.
fn dag() -> impl Strategy<Value = Digraph> {
    (1usize..24).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let edges: BTreeSet<_> = pairs.into_iter().filter(|(a, b)| a < b).map(|(a, b)| (v(a), v(b))).collect();
            Digraph::from_edges(n, edges).unwrap()
        })
    })
}

fn same_closure(a: &Digraph, b: &Digraph) -> bool {
    let (ra, rb) = (ReachabilityIndex::build(a), ReachabilityIndex::build(b));
    a.vertices().all(|x| a.vertices().all(|y| ra.reaches(x, y) == rb.reaches(x, y)))
}

proptest! {
    #[test]
    fn reduction_is_idempotent(g in dag()) {
        let once = transitive_reduction(&g).unwrap();
        prop_assert_eq!(transitive_reduction(&once).unwrap(), once);
    }

    #[test]
    fn reduction_keeps_the_closure(g in dag()) {
        let r = transitive_reduction(&g).unwrap();
        prop_assert!(r.edge_set().is_subset(&g.edge_set()));
        prop_assert!(same_closure(&g, &r));
    }

    #[test]
    fn brute_force_learns_the_reduction(g in dag()) {
        let o = ReachabilityOracle::from_graph(&g);
        let vs: Vec<_> = g.vertices().collect();
        let learned: BTreeSet<_> = brute_force_learn(&vs, &o).unwrap().into_iter().collect();
        prop_assert_eq!(learned, transitive_reduction(&g).unwrap().edge_set());
    }

    #[test]
    fn descendant_sizes_sum_to_depths(n in 2usize..200, h in 1usize..12, seed in any::<u64>()) {
        let spec = GenSpec::new(n.clamp(h + 1, max_tree_size(3, h)), 3, h, seed);
        let g = gen_rooted_tree(&spec).unwrap();
        let edges: Vec<_> = g.edges().collect();
        let m = ArborescenceMetrics::new(&edges, g.roots()[0]).unwrap();
        let by_size: usize = m.vertices().iter().map(|&x| m.descendants(x).len()).sum();
        let by_depth: usize = m.vertices().iter().map(|&x| m.depth(x) + 1).sum();
        prop_assert_eq!(by_size, by_depth);
    }

    #[test]
    fn generator_output_is_its_own_reduction(seed in any::<u64>()) {
        let g = gen_almost_tree(&GenSpec::new(120, 3, 10, seed)).unwrap();
        prop_assert_eq!(transitive_reduction(&g).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn seeded_runs_are_reproducible(seed in any::<u64>()) {
        let spec = GenSpec::new(300, 3, 14, seed);
        prop_assert_eq!(gen_almost_tree(&spec).unwrap(), gen_almost_tree(&spec).unwrap());
        let g = gen_almost_tree(&spec).unwrap();
        let cfg = LearnerConfig::new(3).with_seed(seed);
        let a = run_learner(Alg::AlmostTree, &g, &cfg, None).unwrap();
        let b = run_learner(Alg::AlmostTree, &g, &cfg, None).unwrap();
        prop_assert_eq!(a, b);
    }
}
