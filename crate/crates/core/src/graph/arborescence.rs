use super::{Edge, GraphError, VertexId};

/// Parent, depth, children and descendant structure of an arborescence.
///
/// Descendant sets here are inclusive: `descendants(x)` contains `x`. They are
/// slices of a preorder traversal, so no per-vertex sets are materialized.
#[derive(Clone, Debug)]
pub struct ArborescenceMetrics {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    depth: Vec<usize>,
    children: Vec<Vec<VertexId>>,
    member: Vec<bool>,
    preorder: Vec<VertexId>,
    enter: Vec<usize>,
    exit: Vec<usize>,
}

impl ArborescenceMetrics {
    /// Vertices are the root plus every edge endpoint. Fails if some vertex has
    /// two parents, the root has a parent, or a vertex is unreachable.
    pub fn new(edges: &[Edge], root: VertexId) -> Result<Self, GraphError> {
        let universe = edges
            .iter()
            .flat_map(|&(a, b)| [a.index(), b.index()])
            .chain(std::iter::once(root.index()))
            .max()
            .unwrap_or(0)
            + 1;
        let mut parent = vec![None; universe];
        let mut children = vec![Vec::new(); universe];
        let mut member = vec![false; universe];
        member[root.index()] = true;
        for &(a, b) in edges {
            member[a.index()] = true;
            member[b.index()] = true;
            if b == root {
                return Err(GraphError::NotArborescence(format!("root {root} has parent {a}")));
            }
            if let Some(p) = parent[b.index()].replace(a) {
                return Err(GraphError::NotArborescence(format!("vertex {b} has parents {p} and {a}")));
            }
            children[a.index()].push(b);
        }
        for c in &mut children {
            c.sort_unstable();
        }

        let mut depth = vec![0; universe];
        let mut enter = vec![usize::MAX; universe];
        let mut exit = vec![0; universe];
        let mut preorder = Vec::new();
        // (vertex, next child position)
        let mut stack = vec![(root, 0usize)];
        enter[root.index()] = 0;
        preorder.push(root);
        while let Some(&mut (x, ref mut next)) = stack.last_mut() {
            if let Some(&c) = children[x.index()].get(*next) {
                *next += 1;
                if enter[c.index()] != usize::MAX {
                    return Err(GraphError::NotArborescence(format!("vertex {c} visited twice")));
                }
                depth[c.index()] = depth[x.index()] + 1;
                enter[c.index()] = preorder.len();
                preorder.push(c);
                stack.push((c, 0));
            } else {
                exit[x.index()] = preorder.len();
                stack.pop();
            }
        }
        let members = member.iter().filter(|&&m| m).count();
        if preorder.len() != members {
            return Err(GraphError::NotArborescence(format!(
                "{} of {} vertices unreachable from root {root}",
                members - preorder.len(),
                members
            )));
        }
        Ok(ArborescenceMetrics {
            root,
            parent,
            depth,
            children,
            member,
            preorder,
            enter,
            exit,
        })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Vertices in preorder, root first.
    pub fn vertices(&self) -> &[VertexId] {
        &self.preorder
    }

    pub fn len(&self) -> usize {
        self.preorder.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preorder.is_empty()
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.member.get(x.index()).copied().unwrap_or(false)
    }

    pub fn parent(&self, x: VertexId) -> Option<VertexId> {
        self.parent[x.index()]
    }

    pub fn depth(&self, x: VertexId) -> usize {
        self.depth[x.index()]
    }

    pub fn children(&self, x: VertexId) -> &[VertexId] {
        &self.children[x.index()]
    }

    /// `D(x)` including `x`, in preorder.
    pub fn descendants(&self, x: VertexId) -> &[VertexId] {
        &self.preorder[self.enter[x.index()]..self.exit[x.index()]]
    }

    /// True iff `a` lies on the tree path from the root to `b` (inclusive).
    pub fn is_ancestor_or_self(&self, a: VertexId, b: VertexId) -> bool {
        self.enter[a.index()] <= self.enter[b.index()] && self.exit[b.index()] <= self.exit[a.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::v;

    #[test]
    fn path_metrics() {
        let m = ArborescenceMetrics::new(&[(v(0), v(1)), (v(1), v(2))], v(0)).unwrap();
        assert_eq!(m.depth(v(2)), 2);
        assert_eq!(m.descendants(v(1)), &[v(1), v(2)]);
        assert_eq!(m.parent(v(2)), Some(v(1)));
        assert_eq!(m.parent(v(0)), None);
    }

    #[test]
    fn star_metrics() {
        let m = ArborescenceMetrics::new(&[(v(0), v(3)), (v(0), v(1)), (v(0), v(2))], v(0)).unwrap();
        assert_eq!(m.descendants(v(0)).len(), 4);
        assert_eq!(m.children(v(0)), &[v(1), v(2), v(3)]);
        assert!(m.is_ancestor_or_self(v(0), v(2)));
        assert!(!m.is_ancestor_or_self(v(1), v(2)));
    }

    #[test]
    fn cbt7_descendant_sizes() {
        let edges: Vec<_> = (1..7).map(|i| (v((i - 1) / 2), v(i))).collect();
        let m = ArborescenceMetrics::new(&edges, v(0)).unwrap();
        assert_eq!(m.descendants(v(0)).len(), 7);
        assert_eq!(m.descendants(v(1)).len(), 3);
        for leaf in 3..7 {
            assert_eq!(m.descendants(v(leaf)), &[v(leaf)]);
        }
    }

    #[test]
    fn rejects_two_parents_and_unreachable_vertices() {
        let two = ArborescenceMetrics::new(&[(v(0), v(2)), (v(1), v(2))], v(0));
        assert!(matches!(two, Err(GraphError::NotArborescence(_))));
        let unreachable = ArborescenceMetrics::new(&[(v(0), v(1)), (v(2), v(3))], v(0));
        assert!(matches!(unreachable, Err(GraphError::NotArborescence(_))));
        let cycle = ArborescenceMetrics::new(&[(v(0), v(1)), (v(2), v(3)), (v(3), v(2))], v(0));
        assert!(matches!(cycle, Err(GraphError::NotArborescence(_))));
    }
}
