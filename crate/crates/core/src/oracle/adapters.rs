use fixedbitset::FixedBitSet;

use super::{OracleError, PathOracle, QueryLedger, SeparatorOracle};
use crate::graph::VertexId;

/// `inverse-path(u, v) = path(v, u)`: the hidden graph with every edge reversed.
pub struct InverseOracle<'a> {
    inner: &'a dyn PathOracle,
}

impl<'a> InverseOracle<'a> {
    pub fn new(inner: &'a dyn PathOracle) -> Self {
        InverseOracle { inner }
    }
}

impl PathOracle for InverseOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn batch(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<bool>, OracleError> {
        let swapped: Vec<_> = pairs.iter().map(|&(a, b)| (b, a)).collect();
        self.inner.batch(&swapped)
    }

    fn ledger(&self) -> &QueryLedger {
        self.inner.ledger()
    }
}

/// Rejects any query that touches a vertex outside `allowed`.
pub struct RestrictedOracle<'a> {
    inner: &'a dyn PathOracle,
    allowed: FixedBitSet,
}

impl<'a> RestrictedOracle<'a> {
    pub fn new<I>(inner: &'a dyn PathOracle, allowed: I) -> Self
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut set = FixedBitSet::with_capacity(inner.vertex_count());
        for x in allowed {
            if x.index() < set.len() {
                set.insert(x.index());
            }
        }
        RestrictedOracle { inner, allowed: set }
    }

    pub fn allows(&self, x: VertexId) -> bool {
        self.allowed.contains(x.index())
    }
}

impl PathOracle for RestrictedOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn batch(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<bool>, OracleError> {
        if let Some(&x) = pairs.iter().flat_map(|(a, b)| [a, b]).find(|x| !self.allows(**x)) {
            return Err(OracleError::VertexNotInScope(x));
        }
        self.inner.batch(pairs)
    }

    fn ledger(&self) -> &QueryLedger {
        self.inner.ledger()
    }
}

/// Path oracle simulated by separator queries on an undirected tree rooted at
/// `root`: `path(u, v) = sep(root, u, v)`, with `path(root, v) = 1` for every
/// `v != root` answered locally at no cost.
pub struct SepPathAdapter<'a> {
    sep: &'a dyn SeparatorOracle,
    root: VertexId,
}

impl<'a> SepPathAdapter<'a> {
    pub fn new(sep: &'a dyn SeparatorOracle, root: VertexId) -> Self {
        SepPathAdapter { sep, root }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }
}

impl PathOracle for SepPathAdapter<'_> {
    fn vertex_count(&self) -> usize {
        self.sep.vertex_count()
    }

    fn batch(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<bool>, OracleError> {
        if pairs.is_empty() {
            return Err(OracleError::EmptyBatch);
        }
        let n = self.vertex_count();
        if let Some(&x) = pairs.iter().flat_map(|(a, b)| [a, b]).find(|x| x.index() >= n) {
            return Err(OracleError::VertexOutOfRange { vertex: x, n });
        }
        let triples: Vec<_> = pairs
            .iter()
            .filter(|&&(a, _)| a != self.root)
            .map(|&(a, b)| (self.root, a, b))
            .collect();
        let mut remote = if triples.is_empty() {
            Vec::new()
        } else {
            self.sep.sep_batch(&triples)?
        }
        .into_iter();
        Ok(pairs
            .iter()
            .map(|&(a, b)| {
                if a == self.root {
                    b != self.root
                } else {
                    remote.next().expect("one answer per forwarded triple")
                }
            })
            .collect())
    }

    fn ledger(&self) -> &QueryLedger {
        self.sep.ledger()
    }
}
