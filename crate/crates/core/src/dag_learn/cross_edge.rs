use std::collections::{BTreeMap, BTreeSet};

use super::narrowing::learn_root;
use super::spanning::learn_spanning_tree;
use super::{LearnRng, LearnerConfig};
use crate::error::LearnError;
use crate::graph::{ArborescenceMetrics, Edge, VertexId};
use crate::oracle::PathOracle;
use crate::tree_learn::LearnResult;

/// Finds the one edge of an almost-tree missing from its arborescence `arb`,
/// in two rounds.
///
/// Round 1 probes `path(c, t)` for every arborescence edge `(x, c)` and every
/// `t` under `x` but not under `c`; exactly one child `c*` should answer yes,
/// and the highest positive target is the head `t*`. Round 2 probes
/// `path(s, t*)` for every `s` under `c*`; the deepest positive is the tail.
pub fn learn_cross_edge(
    vs: &[VertexId],
    arb: &[Edge],
    oracle: &dyn PathOracle,
) -> Result<Edge, LearnError> {
    let heads: BTreeSet<VertexId> = arb.iter().map(|&(_, b)| b).collect();
    let root = vs
        .iter()
        .copied()
        .find(|x| !heads.contains(x))
        .ok_or_else(|| LearnError::PreconditionViolated("arborescence has no root".into()))?;
    let m = ArborescenceMetrics::new(arb, root)
        .map_err(|e| LearnError::PreconditionViolated(e.to_string()))?;
    if m.len() != vs.len() {
        return Err(LearnError::PreconditionViolated(format!(
            "arborescence spans {} of {} vertices",
            m.len(),
            vs.len()
        )));
    }

    let mut pairs = Vec::new();
    for &x in m.vertices() {
        for &c in m.children(x) {
            pairs.extend(
                m.descendants(x)
                    .iter()
                    .filter(|&&t| !m.is_ancestor_or_self(c, t))
                    .map(|&t| (c, t)),
            );
        }
    }
    if pairs.is_empty() {
        return Err(LearnError::NoCrossEdgeFound);
    }
    let answers = oracle.batch(&pairs)?;
    let mut positive: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (&(c, t), hit) in pairs.iter().zip(answers) {
        if hit {
            positive.entry(c).or_default().push(t);
        }
    }
    let (c_star, targets) = match positive.len() {
        0 => return Err(LearnError::NoCrossEdgeFound),
        1 => positive.into_iter().next().expect("one entry"),
        k => {
            let cs: Vec<String> = positive.keys().map(|c| c.to_string()).collect();
            return Err(LearnError::AmbiguousCandidate(format!(
                "{k} children reach outside their subtree: {}",
                cs.join(", ")
            )));
        }
    };
    let t_star = *targets
        .iter()
        .find(|&&t| targets.iter().all(|&o| m.is_ancestor_or_self(t, o)))
        .ok_or_else(|| LearnError::AmbiguousCandidate(format!("positive targets of {c_star} have no common top")))?;

    let sources = m.descendants(c_star);
    let pairs: Vec<_> = sources.iter().map(|&s| (s, t_star)).collect();
    let answers = oracle.batch(&pairs)?;
    let hits: Vec<VertexId> = sources.iter().zip(answers).filter_map(|(&s, b)| b.then_some(s)).collect();
    let s_star = *hits
        .iter()
        .find(|&&s| hits.iter().all(|&o| m.is_ancestor_or_self(o, s)))
        .ok_or_else(|| LearnError::AmbiguousCandidate(format!("sources reaching {t_star} have no common bottom")))?;
    Ok((s_star, t_star))
}

/// Root, then an arborescence, then the missing edge.
pub fn learn_almost_tree(
    vs: &[VertexId],
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    rng: &mut LearnRng,
) -> Result<LearnResult, LearnError> {
    let ledger = oracle.ledger();
    let r = {
        let _p = ledger.phase("root");
        learn_root(vs, oracle, cfg, rng)?
    };
    let mut edges = {
        let _p = ledger.phase("spanning_tree");
        learn_spanning_tree(vs, r, oracle, cfg, rng)?
    };
    let cross = {
        let _p = ledger.phase("cross_edge");
        learn_cross_edge(vs, &edges, oracle)?
    };
    edges.push(cross);
    Ok(LearnResult::new(edges, Some(r), oracle))
}
