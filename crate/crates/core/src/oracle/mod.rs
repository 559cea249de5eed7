//! The query channel between learners and the hidden graph.
//!
//! Learners only ever see a `&dyn PathOracle`. Every answer is billed to a
//! [`QueryLedger`]; adapters forward to the oracle they wrap and share its ledger.

mod adapters;
mod ledger;
mod separator;

use std::collections::HashSet;
use std::sync::Mutex;

use thiserror::Error;

use crate::graph::{Digraph, ReachabilityIndex, VertexId};

pub use adapters::{InverseOracle, RestrictedOracle, SepPathAdapter};
pub use ledger::{LedgerSnapshot, PhaseGuard, PhaseStats, QueryLedger};
pub use separator::{SeparatorOracle, TreeSeparatorOracle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("vertex {vertex} out of range for oracle over {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("vertex {0} is outside the oracle's allowed scope")]
    VertexNotInScope(VertexId),
    #[error("empty query batch")]
    EmptyBatch,
}

/// Answers `path(u, v)`: 1 iff a directed path of length at least one leads
/// from `u` to `v` in the hidden graph.
pub trait PathOracle {
    /// Upper bound on vertex ids accepted by this oracle.
    fn vertex_count(&self) -> usize;

    /// Answers a batch of mutually independent queries. Costs one round and
    /// one query per pair.
    fn batch(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<bool>, OracleError>;

    fn ledger(&self) -> &QueryLedger;

    fn query(&self, from: VertexId, to: VertexId) -> Result<bool, OracleError> {
        Ok(self.batch(&[(from, to)])?[0])
    }

    /// `count(s, X)`: number of elements of the multiset `xs` reachable from `s`.
    fn count(&self, s: VertexId, xs: &[VertexId]) -> Result<usize, OracleError> {
        let pairs: Vec<_> = xs.iter().map(|&x| (s, x)).collect();
        Ok(self.batch(&pairs)?.into_iter().filter(|&b| b).count())
    }

    /// `A(target) ∩ set` in one batch. Returns no query for `target` itself.
    fn ancestors_in(&self, target: VertexId, set: &[VertexId]) -> Result<Vec<VertexId>, OracleError> {
        let cands: Vec<VertexId> = set.iter().copied().filter(|&x| x != target).collect();
        if cands.is_empty() {
            return Ok(Vec::new());
        }
        let pairs: Vec<_> = cands.iter().map(|&x| (x, target)).collect();
        let ans = self.batch(&pairs)?;
        Ok(cands.into_iter().zip(ans).filter_map(|(x, b)| b.then_some(x)).collect())
    }

    /// `D(source) ∩ set` in one batch, excluding `source`.
    fn descendants_in(&self, source: VertexId, set: &[VertexId]) -> Result<Vec<VertexId>, OracleError> {
        let cands: Vec<VertexId> = set.iter().copied().filter(|&x| x != source).collect();
        if cands.is_empty() {
            return Ok(Vec::new());
        }
        let pairs: Vec<_> = cands.iter().map(|&x| (source, x)).collect();
        let ans = self.batch(&pairs)?;
        Ok(cands.into_iter().zip(ans).filter_map(|(x, b)| b.then_some(x)).collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleConfig {
    /// Bill each distinct ordered pair at most once. Raw counts still see every query.
    pub dedup_cache: bool,
}

/// Oracle backed by the exact transitive closure of a ground-truth graph.
pub struct ReachabilityOracle {
    index: ReachabilityIndex,
    ledger: QueryLedger,
    seen: Option<Mutex<HashSet<(u32, u32)>>>,
}

impl ReachabilityOracle {
    pub fn new(index: ReachabilityIndex) -> Self {
        Self::with_config(index, OracleConfig::default())
    }

    pub fn with_config(index: ReachabilityIndex, config: OracleConfig) -> Self {
        ReachabilityOracle {
            index,
            ledger: QueryLedger::new(),
            seen: config.dedup_cache.then(|| Mutex::new(HashSet::new())),
        }
    }

    pub fn from_graph(g: &Digraph) -> Self {
        Self::new(ReachabilityIndex::build(g))
    }
}

impl PathOracle for ReachabilityOracle {
    fn vertex_count(&self) -> usize {
        self.index.vertex_count()
    }

    fn batch(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<bool>, OracleError> {
        if pairs.is_empty() {
            return Err(OracleError::EmptyBatch);
        }
        let n = self.index.vertex_count();
        for &(a, b) in pairs {
            for x in [a, b] {
                if x.index() >= n {
                    return Err(OracleError::VertexOutOfRange { vertex: x, n });
                }
            }
        }
        let raw = pairs.len() as u64;
        let charged = match &self.seen {
            None => raw,
            Some(seen) => {
                let mut seen = seen.lock().expect("dedup cache poisoned");
                pairs.iter().filter(|&&(a, b)| seen.insert((a.0, b.0))).count() as u64
            }
        };
        self.ledger.record_batch(charged, raw);
        Ok(pairs.iter().map(|&(a, b)| self.index.reaches(a, b)).collect())
    }

    fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }
}
