use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::chain_cover::min_chain_cover;
use super::narrowing::{bernoulli_sample, order_relation};
use super::{LearnRng, LearnerConfig};
use crate::error::LearnError;
use crate::graph::{ReachabilityIndex, VertexId};
use crate::oracle::PathOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeparatorVerdict {
    Found(VertexId),
    Null,
}

/// Estimation size `K` and the acceptance window `[K/(d+1), K d/(d+1)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub k: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Thresholds {
    pub fn new(cfg: &LearnerConfig, n: usize) -> Self {
        let k = cfg.estimation_size(n);
        let d = cfg.d as f64;
        Thresholds {
            k,
            lo: k as f64 / (d + 1.0),
            hi: k as f64 * d / (d + 1.0),
        }
    }

    pub fn low(&self, count: usize) -> bool {
        (count as f64) < self.lo
    }

    pub fn high(&self, count: usize) -> bool {
        (count as f64) > self.hi
    }

    pub fn in_window(&self, count: usize) -> bool {
        !self.low(count) && !self.high(count)
    }
}

/// `count(s, X_s)` for every `s`, each `X_s` being `k` independent uniform
/// draws from `vs`. One batch for all of them.
pub fn estimate_counts(
    ss: &[VertexId],
    vs: &[VertexId],
    k: usize,
    oracle: &dyn PathOracle,
    rng: &mut LearnRng,
) -> Result<Vec<usize>, LearnError> {
    if ss.is_empty() || vs.is_empty() || k == 0 {
        return Ok(vec![0; ss.len()]);
    }
    let pairs: Vec<_> = ss
        .iter()
        .flat_map(|&s| (0..k).map(move |_| s))
        .map(|s| (s, vs[rng.gen_range(0..vs.len())]))
        .collect();
    let answers = oracle.batch(&pairs)?;
    Ok(answers.chunks(k).map(|c| c.iter().filter(|&&b| b).count()).collect())
}

/// `|V|/d <= count(v, V) <= |V|(d-1)/d` with strict descendant counts.
pub fn is_even_separator(v: VertexId, vs: &[VertexId], reach: &ReachabilityIndex, d: usize) -> bool {
    is_even_separator_within(v, vs, reach, d, 0)
}

/// [`is_even_separator`] with the count allowed to be off by `slack`.
pub fn is_even_separator_within(v: VertexId, vs: &[VertexId], reach: &ReachabilityIndex, d: usize, slack: usize) -> bool {
    let n = vs.len();
    let count = vs.iter().filter(|&&x| reach.reaches(v, x)).count();
    (count + slack) * d >= n && count.saturating_sub(slack) * d <= n * (d - 1)
}

/// `|V|/(d+2) <= |V_1| <= |V|(d+1)/(d+2)`, exact integer arithmetic.
pub fn is_near_separator_split(n: usize, v1: usize, d: usize) -> bool {
    v1 * (d + 2) >= n && v1 * (d + 2) <= n * (d + 1)
}

/// Shrinks the candidate set `ys` using the sampled counts.
///
/// `ss` is sorted ascending and `counts[i]` belongs to `ss[i]`. The sample is
/// split into a minimum chain cover; on each chain the most ancestral
/// low-count element `l` and the most descendant high-count element `g` are
/// located, then `A(g)`, `g`, `D(l)` and `l` are removed from `ys` with one
/// batch.
pub fn filter_separator(
    ss: &[VertexId],
    counts: &[usize],
    ys: &[VertexId],
    th: &Thresholds,
    oracle: &dyn PathOracle,
) -> Result<Vec<VertexId>, LearnError> {
    let rel = order_relation(ss, oracle)?;
    let mut lows = BTreeSet::new();
    let mut highs = BTreeSet::new();
    for chain in min_chain_cover(&rel) {
        if let Some(&i) = chain.iter().find(|&&i| th.low(counts[i])) {
            lows.insert(ss[i]);
        }
        if let Some(&i) = chain.iter().rev().find(|&&i| th.high(counts[i])) {
            highs.insert(ss[i]);
        }
    }
    let mut removed: BTreeSet<VertexId> = lows.union(&highs).copied().collect();
    // (pair, vertex removed on a positive answer)
    let mut probes = Vec::new();
    for &g in &highs {
        probes.extend(ys.iter().filter(|&&y| y != g).map(|&y| ((y, g), y)));
    }
    for &l in &lows {
        probes.extend(ys.iter().filter(|&&y| y != l).map(|&y| ((l, y), y)));
    }
    if !probes.is_empty() {
        let pairs: Vec<_> = probes.iter().map(|&(p, _)| p).collect();
        let answers = oracle.batch(&pairs)?;
        removed.extend(probes.iter().zip(answers).filter(|(_, hit)| *hit).map(|(&(_, y), _)| y));
    }
    Ok(ys.iter().copied().filter(|y| !removed.contains(y)).collect())
}

/// Looks for a near-separator among `ys = A(v) ∩ vs` in a DAG on `vs`
/// rooted at `r`. May return `v` itself, which is always sampled.
pub fn learn_separator(
    v: VertexId,
    ys: &[VertexId],
    vs: &[VertexId],
    r: VertexId,
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<SeparatorVerdict, LearnError> {
    let n = vs.len();
    let th = Thresholds::new(cfg, n);
    let mut ys: Vec<VertexId> = ys.to_vec();
    ys.sort_unstable();

    if ys.len() as f64 > n as f64 / th.k as f64 {
        let mut ss = bernoulli_sample(&ys, cfg.sample_size(n), rng);
        ss.push(v);
        ss.push(r);
        ss.sort_unstable();
        ss.dedup();
        let counts = estimate_counts(&ss, vs, th.k, oracle, rng)?;
        if counts.iter().all(|&c| th.low(c)) || counts.iter().all(|&c| th.high(c)) {
            return Ok(SeparatorVerdict::Null);
        }
        if let Some(i) = counts.iter().position(|&c| th.in_window(c)) {
            return Ok(SeparatorVerdict::Found(ss[i]));
        }
        ys = filter_separator(&ss, &counts, &ys, &th, oracle)?;
    }

    let counts = estimate_counts(&ys, vs, th.k, oracle, rng)?;
    Ok(match counts.iter().position(|&c| th.in_window(c)) {
        Some(i) => SeparatorVerdict::Found(ys[i]),
        None => SeparatorVerdict::Null,
    })
}
