use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::narrowing::learn_parent;
use super::separator::{is_near_separator_split, learn_separator, SeparatorVerdict};
use super::{LearnRng, LearnerConfig};
use crate::error::LearnError;
use crate::graph::{Edge, VertexId};
use crate::oracle::PathOracle;
use crate::tree_learn::brute_force_learn;

/// One accepted split: separator `w` cut `vertices` (`n` of them) into
/// `V_1 = D(w) ∪ {w}` of size `v1` and the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub w: VertexId,
    pub n: usize,
    pub v1: usize,
    pub vertices: Vec<VertexId>,
}

/// Learns an arborescence of the DAG induced on `vs`, rooted at `r`.
///
/// Every vertex of `vs` must be reachable from `r` inside `vs`.
pub fn learn_spanning_tree(
    vs: &[VertexId],
    r: VertexId,
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<Vec<Edge>, LearnError> {
    learn_spanning_tree_traced(vs, r, oracle, cfg, rng, None)
}

/// [`learn_spanning_tree`] that also appends every accepted split to `trace`.
pub fn learn_spanning_tree_traced(
    vs: &[VertexId],
    r: VertexId,
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
    trace: Option<&RefCell<Vec<SplitRecord>>>,
) -> Result<Vec<Edge>, LearnError> {
    cfg.validate()?;
    let mut set: Vec<VertexId> = vs.iter().copied().chain(std::iter::once(r)).collect();
    set.sort_unstable();
    set.dedup();
    let seed = rng.gen();
    let mut edges = Vec::with_capacity(set.len().saturating_sub(1));
    recurse(set, r, oracle, cfg, seed, trace, &mut edges)?;
    edges.sort_unstable();
    Ok(edges)
}

fn recurse(
    vs: Vec<VertexId>,
    r: VertexId,
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    seed: u64,
    trace: Option<&RefCell<Vec<SplitRecord>>>,
    out: &mut Vec<Edge>,
) -> Result<(), LearnError> {
    let n = vs.len();
    if n <= cfg.g_base {
        out.extend(base_case(&vs, r, oracle)?);
        return Ok(());
    }
    let mut rng = LearnRng::seed_from_u64(seed);
    let cap = cfg.loop_cap();
    for _ in 0..cap {
        let v = vs[rng.gen_range(0..n)];
        let ys = oracle.ancestors_in(v, &vs)?;
        let w = match learn_separator(v, &ys, &vs, r, oracle, cfg, &mut rng)? {
            SeparatorVerdict::Found(w) if w != r => w,
            _ => continue,
        };
        let below: BTreeSet<VertexId> = oracle.descendants_in(w, &vs)?.into_iter().collect();
        let v1_len = below.len() + 1;
        if !is_near_separator_split(n, v1_len, cfg.d) {
            continue;
        }
        let u = learn_parent(w, &vs, oracle, cfg, &mut rng)?;
        out.push((u, w));
        if let Some(t) = trace {
            t.borrow_mut().push(SplitRecord { w, n, v1: v1_len, vertices: vs.clone() });
        }

        let mut v1: Vec<VertexId> = below.iter().copied().collect();
        v1.push(w);
        v1.sort_unstable();
        let v2: Vec<VertexId> = vs.into_iter().filter(|x| *x != w && !below.contains(x)).collect();
        let (s1, s2): (u64, u64) = (rng.gen(), rng.gen());
        let mut left = Vec::new();
        let mut right = Vec::new();
        let (a, b) = oracle.ledger().fork_join2(
            || recurse(v1, w, oracle, cfg, s1, trace, &mut left),
            || recurse(v2, r, oracle, cfg, s2, trace, &mut right),
        );
        a?;
        b?;
        out.append(&mut left);
        out.append(&mut right);
        return Ok(());
    }
    Err(LearnError::LoopCapExceeded(cap))
}

/// Brute-force the reduced relation on `vs`, then keep a BFS arborescence
/// from `r` (lowest-id parent first).
fn base_case(vs: &[VertexId], r: VertexId, oracle: &dyn PathOracle) -> Result<Vec<Edge>, LearnError> {
    let reduced = brute_force_learn(vs, oracle)?;
    let mut succ: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for &(a, b) in &reduced {
        succ.entry(a).or_default().push(b);
    }
    for list in succ.values_mut() {
        list.sort_unstable();
    }
    let mut seen: BTreeSet<VertexId> = BTreeSet::from([r]);
    let mut queue = VecDeque::from([r]);
    let mut edges = Vec::with_capacity(vs.len().saturating_sub(1));
    while let Some(x) = queue.pop_front() {
        for &y in succ.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(y) {
                edges.push((x, y));
                queue.push_back(y);
            }
        }
    }
    if seen.len() != vs.len() {
        let missing = vs.iter().find(|x| !seen.contains(x)).copied();
        return Err(LearnError::PreconditionViolated(format!(
            "vertex {} is not reachable from {r}",
            missing.map_or_else(|| "?".to_owned(), |m| m.to_string())
        )));
    }
    Ok(edges)
}
