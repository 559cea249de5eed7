use super::{OracleError, QueryLedger};
use crate::graph::{UndirectedTree, VertexId};

/// `sep(a, b, c) = 1` iff removing `b` disconnects `a` from `c` in a hidden
/// undirected tree.
pub trait SeparatorOracle {
    fn vertex_count(&self) -> usize;

    /// One round, one query per triple.
    fn sep_batch(&self, triples: &[(VertexId, VertexId, VertexId)]) -> Result<Vec<bool>, OracleError>;

    fn ledger(&self) -> &QueryLedger;

    fn sep(&self, a: VertexId, b: VertexId, c: VertexId) -> Result<bool, OracleError> {
        Ok(self.sep_batch(&[(a, b, c)])?[0])
    }
}

/// Exact separator answers from a ground-truth tree, via an internal rooting at 0.
pub struct TreeSeparatorOracle {
    parent: Vec<Option<VertexId>>,
    enter: Vec<usize>,
    exit: Vec<usize>,
    ledger: QueryLedger,
}

impl TreeSeparatorOracle {
    pub fn new(tree: &UndirectedTree) -> Self {
        let n = tree.vertex_count();
        let mut parent = vec![None; n];
        let mut enter = vec![0; n];
        let mut exit = vec![0; n];
        let mut clock = 0;
        if n > 0 {
            let mut stack = vec![(VertexId(0), 0usize)];
            enter[0] = clock;
            clock += 1;
            while let Some(&mut (x, ref mut next)) = stack.last_mut() {
                let ns = tree.neighbors(x);
                match ns.get(*next) {
                    Some(&y) => {
                        *next += 1;
                        if Some(y) == parent[x.index()] {
                            continue;
                        }
                        parent[y.index()] = Some(x);
                        enter[y.index()] = clock;
                        clock += 1;
                        stack.push((y, 0));
                    }
                    None => {
                        exit[x.index()] = clock;
                        stack.pop();
                    }
                }
            }
        }
        TreeSeparatorOracle {
            parent,
            enter,
            exit,
            ledger: QueryLedger::new(),
        }
    }

    fn is_ancestor_or_self(&self, a: VertexId, b: VertexId) -> bool {
        self.enter[a.index()] <= self.enter[b.index()] && self.exit[b.index()] <= self.exit[a.index()]
    }

    fn lca(&self, a: VertexId, c: VertexId) -> VertexId {
        let mut x = a;
        while !self.is_ancestor_or_self(x, c) {
            x = self.parent[x.index()].expect("root is everyone's ancestor");
        }
        x
    }

    fn separates(&self, a: VertexId, b: VertexId, c: VertexId) -> bool {
        if b == a || b == c {
            return false;
        }
        let top = self.lca(a, c);
        (self.is_ancestor_or_self(b, a) || self.is_ancestor_or_self(b, c)) && self.is_ancestor_or_self(top, b)
    }
}

impl SeparatorOracle for TreeSeparatorOracle {
    fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    fn sep_batch(&self, triples: &[(VertexId, VertexId, VertexId)]) -> Result<Vec<bool>, OracleError> {
        if triples.is_empty() {
            return Err(OracleError::EmptyBatch);
        }
        let n = self.vertex_count();
        if let Some(&x) = triples.iter().flat_map(|(a, b, c)| [a, b, c]).find(|x| x.index() >= n) {
            return Err(OracleError::VertexOutOfRange { vertex: x, n });
        }
        let k = triples.len() as u64;
        self.ledger.record_batch(k, k);
        Ok(triples.iter().map(|&(a, b, c)| self.separates(a, b, c)).collect())
    }

    fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }
}
