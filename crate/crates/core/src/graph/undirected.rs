use std::collections::BTreeSet;

use super::{Digraph, GraphError, VertexId};

/// Undirected edge stored with the smaller endpoint first.
pub type UndirectedEdge = (VertexId, VertexId);

pub fn undirected(a: VertexId, b: VertexId) -> UndirectedEdge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A spanning tree on `0..n` without orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedTree {
    adj: Vec<Vec<VertexId>>,
}

impl UndirectedTree {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = UndirectedEdge>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x.index() >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !seen.insert(undirected(a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[a.index()].push(b);
            adj[b.index()].push(a);
        }
        if n > 0 && seen.len() != n - 1 {
            return Err(GraphError::Format(format!("{} edges cannot span a tree on {n} vertices", seen.len())));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let tree = UndirectedTree { adj };
        if n > 0 && tree.reachable_from(VertexId(0)) != n {
            return Err(GraphError::Format("edge set is not connected".into()));
        }
        Ok(tree)
    }

    /// Forgets the orientation of an arborescence.
    pub fn from_digraph(g: &Digraph) -> Result<Self, GraphError> {
        Self::from_edges(g.vertex_count(), g.edges().map(|(a, b)| undirected(a, b)))
    }

    fn reachable_from(&self, start: VertexId) -> usize {
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![start];
        let mut count = 0;
        while let Some(x) = stack.pop() {
            if !std::mem::replace(&mut seen[x.index()], true) {
                count += 1;
                stack.extend(self.adj[x.index()].iter().filter(|y| !seen[y.index()]));
            }
        }
        count
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.adj[x.index()]
    }

    pub fn edges(&self) -> BTreeSet<UndirectedEdge> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().map(move |&b| undirected(VertexId::new(a), b)))
            .collect()
    }
}
