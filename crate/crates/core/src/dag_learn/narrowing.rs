use rand::Rng;

use super::{LearnRng, LearnerConfig};
use crate::error::LearnError;
use crate::graph::VertexId;
use crate::oracle::PathOracle;

/// Keeps each element independently with probability `min(1, m / |ys|)`.
pub fn bernoulli_sample<R: Rng>(ys: &[VertexId], m: f64, rng: &mut R) -> Vec<VertexId> {
    if ys.is_empty() {
        return Vec::new();
    }
    let p = m / ys.len() as f64;
    if p >= 1.0 {
        return ys.to_vec();
    }
    ys.iter().copied().filter(|_| rng.gen_bool(p.max(0.0))).collect()
}

/// `rel[i][j] = path(xs[i], xs[j])` for all `i != j`, in one batch.
pub(super) fn order_relation(xs: &[VertexId], oracle: &dyn PathOracle) -> Result<Vec<Vec<bool>>, LearnError> {
    let k = xs.len();
    let mut rel = vec![vec![false; k]; k];
    if k < 2 {
        return Ok(rel);
    }
    let pairs: Vec<_> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (xs[i], xs[j])))
        .collect();
    let mut answers = oracle.batch(&pairs)?.into_iter();
    for (i, row) in rel.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = answers.next().expect("one answer per pair");
            }
        }
    }
    Ok(rel)
}

/// First index with nothing below it in `rel` (no `j` reaching it).
fn first_minimal(rel: &[Vec<bool>]) -> Option<usize> {
    (0..rel.len()).find(|&i| (0..rel.len()).all(|j| !rel[j][i]))
}

/// First index reaching nothing else in `rel`.
fn first_maximal(rel: &[Vec<bool>]) -> Option<usize> {
    (0..rel.len()).find(|&i| !rel[i].iter().any(|&b| b))
}

fn sorted(mut xs: Vec<VertexId>) -> Vec<VertexId> {
    xs.sort_unstable();
    xs
}

/// Finds a vertex of `vs` with no ancestor in `vs`.
///
/// Starts from the lowest-id vertex, learns its ancestors, and while that set
/// is larger than `m` jumps to a minimal element of a random sample and
/// restricts to its ancestors.
pub fn learn_root(
    vs: &[VertexId],
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<VertexId, LearnError> {
    let mut pivot = *vs.iter().min().ok_or(LearnError::EmptyVertexSet)?;
    let m = cfg.sample_size(vs.len());
    let mut ys = sorted(oracle.ancestors_in(pivot, vs)?);
    let mut iterations = 0;
    while ys.len() as f64 > m {
        if iterations == cfg.eps_cap {
            return Err(LearnError::IterationCapExceeded { what: "learn_root", cap: cfg.eps_cap });
        }
        iterations += 1;
        let sample = bernoulli_sample(&ys, m, rng);
        if sample.is_empty() {
            continue;
        }
        let rel = order_relation(&sample, oracle)?;
        pivot = sample[first_minimal(&rel).ok_or_else(cyclic)?];
        ys = oracle.ancestors_in(pivot, &ys)?;
    }
    if ys.is_empty() {
        return Ok(pivot);
    }
    let rel = order_relation(&ys, oracle)?;
    Ok(ys[first_minimal(&rel).ok_or_else(cyclic)?])
}

/// Finds an in-neighbour of `v` inside `vs`: the mirror image of
/// [`learn_root`], narrowing towards a maximal ancestor of `v`.
pub fn learn_parent(
    v: VertexId,
    vs: &[VertexId],
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<VertexId, LearnError> {
    let m = cfg.sample_size(vs.len());
    let mut ys = sorted(oracle.ancestors_in(v, vs)?);
    if ys.is_empty() {
        return Err(LearnError::NoParent(v));
    }
    let mut iterations = 0;
    while ys.len() as f64 > m {
        if iterations == cfg.eps_cap {
            return Err(LearnError::IterationCapExceeded { what: "learn_parent", cap: cfg.eps_cap });
        }
        iterations += 1;
        let sample = bernoulli_sample(&ys, m, rng);
        if sample.is_empty() {
            continue;
        }
        let rel = order_relation(&sample, oracle)?;
        let y = sample[first_maximal(&rel).ok_or_else(cyclic)?];
        // `y` itself stays: under strict reachability it is not its own descendant.
        let mut next = oracle.descendants_in(y, &ys)?;
        next.push(y);
        ys = sorted(next);
    }
    let rel = order_relation(&ys, oracle)?;
    Ok(ys[first_maximal(&rel).ok_or_else(cyclic)?])
}

fn cyclic() -> LearnError {
    LearnError::PreconditionViolated("sampled vertices have no extremal element; hidden graph is cyclic".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::rng_from_seed;
    use crate::graph::{v, Digraph};
    use crate::oracle::ReachabilityOracle;

    fn oracle(n: usize, edges: &[(usize, usize)]) -> ReachabilityOracle {
        ReachabilityOracle::from_graph(&Digraph::from_edges(n, edges.iter().map(|&(a, b)| (v(a), v(b)))).unwrap())
    }

    fn all(n: usize) -> Vec<VertexId> {
        (0..n).map(v).collect()
    }

    #[test]
    fn sample_clamps_and_handles_empty() {
        let mut rng = rng_from_seed(1);
        let ys = all(10);
        assert_eq!(bernoulli_sample(&ys, 10.0, &mut rng), ys);
        assert_eq!(bernoulli_sample(&ys, 50.0, &mut rng), ys);
        assert!(bernoulli_sample(&[], 3.0, &mut rng).is_empty());
    }

    #[test]
    fn sample_size_statistics() {
        // Binomial(1000, 0.1): mean 100, sd 9.49; the mean of 10^4 draws
        // has sd 0.095, so 3 sd is about 0.28.
        let mut rng = rng_from_seed(7);
        let ys = all(1000);
        let trials = 10_000;
        let total: usize = (0..trials).map(|_| bernoulli_sample(&ys, 100.0, &mut rng).len()).sum();
        let mean = total as f64 / trials as f64;
        assert!((mean - 100.0).abs() < 3.0 * (1000.0f64 * 0.1 * 0.9).sqrt() / (trials as f64).sqrt());
    }

    #[test]
    fn root_of_chain_is_unique() {
        // 3 -> 0 -> 2 -> 1, pivot starts at 0
        let o = oracle(4, &[(3, 0), (0, 2), (2, 1)]);
        for seed in 0..10 {
            let mut rng = rng_from_seed(seed);
            assert_eq!(learn_root(&all(4), &o, &LearnerConfig::new(2), &mut rng).unwrap(), v(3));
        }
    }

    #[test]
    fn root_of_long_chain_exercises_the_loop() {
        // n = 400 chain in scrambled order; m = 6 * 20 = 120 < 399 ancestors
        let n = 400;
        let perm: Vec<usize> = (0..n).map(|i| (i * 151) % n).collect();
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (perm[i], perm[i - 1])).collect();
        let o = oracle(n, &edges);
        let root = perm[n - 1];
        for seed in 0..20 {
            let mut rng = rng_from_seed(seed);
            assert_eq!(learn_root(&all(n), &o, &LearnerConfig::new(2), &mut rng).unwrap(), v(root));
        }
        assert!(o.ledger().rounds() > 20 * 2);
    }

    #[test]
    fn parent_in_chain_and_almost_tree() {
        let o = oracle(3, &[(0, 1), (1, 2)]);
        let mut rng = rng_from_seed(0);
        let cfg = LearnerConfig::new(2);
        assert_eq!(learn_parent(v(2), &all(3), &o, &cfg, &mut rng).unwrap(), v(1));
        assert_eq!(learn_parent(v(0), &all(3), &o, &cfg, &mut rng), Err(LearnError::NoParent(v(0))));

        // AT4: r=0 -> a=1, r -> b=2, a -> c=3, cross (b, c)
        let at4 = oracle(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let p = learn_parent(v(3), &all(4), &at4, &LearnerConfig::new(3), &mut rng).unwrap();
        assert!(p == v(1) || p == v(2));
        assert_eq!(learn_root(&all(4), &at4, &LearnerConfig::new(3), &mut rng).unwrap(), v(0));
    }

    #[test]
    fn parent_in_long_chain() {
        let n = 500;
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let o = oracle(n, &edges);
        for seed in 0..10 {
            let mut rng = rng_from_seed(seed);
            let p = learn_parent(v(n - 1), &all(n), &o, &LearnerConfig::new(2), &mut rng).unwrap();
            assert_eq!(p, v(n - 2));
        }
    }

    #[test]
    fn caps_are_reported() {
        // m = 0.2 forces the loop to run until the ancestor set is empty,
        // and most samples of a 399-element set at rate 0.2/399 are empty.
        let n = 400;
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i - 1)).collect();
        let o = oracle(n, &edges);
        let tiny = LearnerConfig { c1: 0.01, eps_cap: 1, ..LearnerConfig::new(2) };
        let mut rng = rng_from_seed(3);
        let err = learn_root(&all(n), &o, &tiny, &mut rng).unwrap_err();
        assert!(err.is_cap_exceeded(), "{err}");
        let err = learn_parent(v(0), &all(n), &o, &tiny, &mut rng).unwrap_err();
        assert!(err.is_cap_exceeded(), "{err}");
    }
}
