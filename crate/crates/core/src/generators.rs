//! Seeded instance families. Every output is relabeled by a random
//! permutation so vertex ids carry no structural hints.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{transitive_reduction, Digraph, Edge, UndirectedTree, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error("no valid cross edge found after {0} arborescences")]
    NoValidCrossEdge(usize),
}

/// Shape parameters shared by the generators. `d` bounds in-degree plus
/// out-degree of every vertex; `a` is the root count for multitrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub d: usize,
    pub h: usize,
    pub a: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, d: usize, h: usize, seed: u64) -> Self {
        GenSpec { n, d, h, a: 1, seed }
    }

    pub fn with_roots(self, a: usize) -> Self {
        GenSpec { a, ..self }
    }

    fn check(&self) -> Result<(), GenError> {
        if self.d < 2 {
            return Err(GenError::InfeasibleSpec(format!("d = {} < 2", self.d)));
        }
        if self.h < 1 {
            return Err(GenError::InfeasibleSpec("h must be at least 1".into()));
        }
        if self.a < 1 || self.a > self.n {
            return Err(GenError::InfeasibleSpec(format!("a = {} outside 1..={}", self.a, self.n)));
        }
        Ok(())
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<VertexId> {
    let mut perm: Vec<VertexId> = (0..n).map(VertexId::new).collect();
    perm.shuffle(rng);
    perm
}

/// Largest tree with height at most `h` when the root has at most `d`
/// children and every other vertex at most `d - 1`. Saturates at `usize::MAX`.
pub fn max_tree_size(d: usize, h: usize) -> usize {
    let mut total: usize = 1;
    let mut level: usize = 1;
    for i in 0..h {
        level = level.saturating_mul(if i == 0 { d } else { d - 1 });
        total = total.saturating_add(level);
        if level == 0 {
            break;
        }
    }
    total
}

/// Child-capacity of a vertex in a tree of total degree `d`.
fn child_capacity(d: usize, is_root: bool) -> usize {
    if is_root {
        d
    } else {
        d - 1
    }
}

/// Random attachment into slots `(vertex, depth)` with spare capacity and
/// depth below `h`. Returns tree edges on vertices `0..n` with a spine
/// `0 -> 1 -> .. -> h` so the height is exactly `h`. Unpermuted.
fn attach_tree<R: Rng>(n: usize, d: usize, h: usize, rng: &mut R) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut depth = vec![0usize; n];
    let mut kids = vec![0usize; n];
    for i in 1..=h {
        edges.push((VertexId::new(i - 1), VertexId::new(i)));
        depth[i] = i;
        kids[i - 1] = 1;
    }
    let mut open: Vec<usize> = (0..h).filter(|&x| kids[x] < child_capacity(d, x == 0)).collect();
    for x in h + 1..n {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        edges.push((VertexId::new(p), VertexId::new(x)));
        depth[x] = depth[p] + 1;
        kids[p] += 1;
        if kids[p] == child_capacity(d, p == 0) {
            open.swap_remove(slot);
        }
        if depth[x] < h {
            open.push(x);
        }
    }
    edges
}

fn permuted(n: usize, edges: &[Edge], perm: &[VertexId]) -> Digraph {
    Digraph::from_edges(n, edges.iter().map(|&(a, b)| (perm[a.index()], perm[b.index()])))
        .expect("generator edges are simple")
}

/// Arborescence with exactly `spec.n` vertices, height exactly `spec.h`, and
/// total degree at most `spec.d`.
pub fn gen_rooted_tree(spec: &GenSpec) -> Result<Digraph, GenError> {
    spec.check()?;
    let GenSpec { n, d, h, .. } = *spec;
    if n < h + 1 || n > max_tree_size(d, h) {
        return Err(GenError::InfeasibleSpec(format!(
            "no tree with n = {n}, height {h}, degree <= {d} (need {} <= n <= {})",
            h + 1,
            max_tree_size(d, h)
        )));
    }
    let mut rng = rng_from_seed(spec.seed);
    let edges = attach_tree(n, d, h, &mut rng);
    let perm = random_permutation(n, &mut rng);
    Ok(permuted(n, &edges, &perm))
}

/// Multitree with exactly `spec.a` roots. Starts from `a` arborescences of
/// depth at most `h` and adds merge edges that keep every pair of vertices
/// joined by at most one directed path.
pub fn gen_multitree(spec: &GenSpec) -> Result<Digraph, GenError> {
    spec.check()?;
    let GenSpec { n, d, h, a, .. } = *spec;
    if n > a.saturating_mul(max_tree_size(d, h)) {
        return Err(GenError::InfeasibleSpec(format!(
            "{a} trees of height <= {h} and degree <= {d} cannot hold {n} vertices"
        )));
    }
    let mut rng = rng_from_seed(spec.seed);

    // Forest: vertices 0..a are roots; everyone else attaches to an open slot.
    let mut g = Digraph::new(n);
    let mut depth = vec![0usize; n];
    let mut open: Vec<usize> = if h > 0 { (0..a).collect() } else { Vec::new() };
    for x in a..n {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        g.add_edge(VertexId::new(p), VertexId::new(x)).expect("fresh edge");
        depth[x] = depth[p] + 1;
        if g.out_degree(VertexId::new(p)) == child_capacity(d, p < a) {
            open.swap_remove(slot);
        }
        if depth[x] < h {
            open.push(x);
        }
    }

    // Closed reachability rows, maintained incrementally.
    let mut desc: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut b = FixedBitSet::with_capacity(n);
            b.insert(i);
            b
        })
        .collect();
    let mut anc = desc.clone();
    let order = g.topological_order().expect("forest is acyclic");
    for &x in order.iter().rev() {
        for &y in g.out_neighbors(x) {
            let child = desc[y.index()].clone();
            desc[x.index()].union_with(&child);
        }
    }
    for &x in &order {
        for &y in g.out_neighbors(x) {
            let parent = anc[x.index()].clone();
            anc[y.index()].union_with(&parent);
        }
    }

    let target = if n > a { a + n / 16 } else { 0 };
    let attempts = 40 * target + 64;
    let mut merges = 0;
    for _ in 0..attempts {
        if merges == target {
            break;
        }
        let u = rng.gen_range(0..n);
        let w = rng.gen_range(0..n);
        let (uu, ww) = (VertexId::new(u), VertexId::new(w));
        if u == w || g.in_degree(ww) == 0 || g.degree(uu) >= d || g.degree(ww) >= d {
            continue;
        }
        // A second u..w route, or any pair x <= u, y >= w already connected,
        // would create a duplicate path (or a cycle).
        let clash = anc[u].ones().any(|x| !desc[x].is_disjoint(&desc[w]));
        if clash {
            continue;
        }
        g.add_edge(uu, ww).expect("checked fresh");
        let below = desc[w].clone();
        let above = anc[u].clone();
        for x in above.ones() {
            desc[x].union_with(&below);
        }
        for y in below.ones() {
            anc[y].union_with(&above);
        }
        merges += 1;
    }

    let perm = random_permutation(n, &mut rng);
    Ok(g.relabel(&perm))
}

/// Butterfly (FFT) network of depth `h`: `2^h (h + 1)` vertices, unique
/// source-to-sink paths. Built literally from the recursive definition, the
/// two sub-networks first and the new sink layer last.
pub fn gen_butterfly(h: usize) -> Digraph {
    let (n, edges, _) = butterfly_parts(h);
    Digraph::from_edges(n, edges).expect("butterfly edges are simple")
}

fn butterfly_parts(h: usize) -> (usize, Vec<Edge>, Vec<VertexId>) {
    if h == 0 {
        return (1, Vec::new(), vec![VertexId(0)]);
    }
    let (sub_n, sub_edges, sub_targets) = butterfly_parts(h - 1);
    let m = sub_targets.len();
    let shift = |x: VertexId, by: usize| VertexId::new(x.index() + by);
    let mut edges: Vec<Edge> = sub_edges.clone();
    edges.extend(sub_edges.iter().map(|&(a, b)| (shift(a, sub_n), shift(b, sub_n))));
    let targets: Vec<VertexId> = sub_targets
        .iter()
        .copied()
        .chain(sub_targets.iter().map(|&t| shift(t, sub_n)))
        .collect();
    let new: Vec<VertexId> = (0..2 * m).map(|i| VertexId::new(2 * sub_n + i)).collect();
    for i in 0..m {
        for t in [targets[i], targets[i + m]] {
            edges.push((t, new[i]));
            edges.push((t, new[i + m]));
        }
    }
    (2 * sub_n + 2 * m, edges, new)
}

/// `n` for a butterfly of depth `h`.
pub fn butterfly_size(h: usize) -> usize {
    (1usize << h) * (h + 1)
}

/// Depth `h` with `2^h (h + 1) = n`, if any.
pub fn butterfly_depth(n: usize) -> Option<usize> {
    (0..usize::BITS as usize - 8)
        .take_while(|&h| butterfly_size(h) <= n)
        .find(|&h| butterfly_size(h) == n)
}

/// Butterfly with a seeded relabeling.
pub fn gen_butterfly_shuffled(h: usize, seed: u64) -> Digraph {
    let g = gen_butterfly(h);
    let mut rng = rng_from_seed(seed);
    let perm = random_permutation(g.vertex_count(), &mut rng);
    g.relabel(&perm)
}

/// Cross edge `(s, t)` that keeps the arborescence plus edge acyclic and free
/// of transitive edges, with degree room at both ends.
fn valid_cross(g: &Digraph, anc: &[FixedBitSet], s: usize, t: usize, d: usize) -> bool {
    let (sv, tv) = (VertexId::new(s), VertexId::new(t));
    let Some(&pt) = g.in_neighbors(tv).first() else {
        return false;
    };
    s != t
        && !anc[t].contains(s)
        && !anc[s].contains(t)
        && !anc[s].contains(pt.index())
        && g.degree(sv) < d
        && g.degree(tv) < d
}

/// Arborescence of height `spec.h` plus one cross edge, sampled uniformly
/// among valid cross edges. The result is its own transitive reduction.
pub fn gen_almost_tree(spec: &GenSpec) -> Result<Digraph, GenError> {
    const RETRIES: usize = 16;
    spec.check()?;
    if spec.n < 4 {
        return Err(GenError::InfeasibleSpec(format!("almost-tree needs n >= 4, got {}", spec.n)));
    }
    let n = spec.n;
    for retry in 0..RETRIES {
        let tree_spec = GenSpec {
            seed: spec.seed.wrapping_add((retry as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
            ..*spec
        };
        let mut g = gen_rooted_tree(&tree_spec)?;
        let mut rng = rng_from_seed(tree_spec.seed ^ 0x5eed_c405_5ed9_e000);
        let anc = closed_ancestors(&g);

        let mut pick = None;
        for _ in 0..64 * n {
            let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if valid_cross(&g, &anc, s, t, spec.d) {
                pick = Some((s, t));
                break;
            }
        }
        if pick.is_none() {
            let all: Vec<(usize, usize)> = (0..n)
                .flat_map(|s| (0..n).map(move |t| (s, t)))
                .filter(|&(s, t)| valid_cross(&g, &anc, s, t, spec.d))
                .collect();
            pick = all.choose(&mut rng).copied();
        }
        let Some((s, t)) = pick else { continue };
        g.add_edge(VertexId::new(s), VertexId::new(t)).expect("cross edge is fresh");
        debug_assert_eq!(transitive_reduction(&g).expect("acyclic"), g);
        return Ok(g);
    }
    Err(GenError::NoValidCrossEdge(RETRIES))
}

/// Ancestor-or-self rows of a DAG.
fn closed_ancestors(g: &Digraph) -> Vec<FixedBitSet> {
    let n = g.vertex_count();
    let mut anc: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut b = FixedBitSet::with_capacity(n);
            b.insert(i);
            b
        })
        .collect();
    for x in g.topological_order().expect("acyclic") {
        for &y in g.out_neighbors(x) {
            let above = anc[x.index()].clone();
            anc[y.index()].union_with(&above);
        }
    }
    anc
}

/// Caterpillar of height `h` (spine `p0 -> .. -> ph`, one leg below each of
/// `p0..p(h-1)`) with a complete `d`-ary tree rooted at `ph` holding the
/// remaining vertices, and one cross edge from a random leg to a random leaf
/// of the `d`-ary tree.
///
/// Internal vertices of the `d`-ary tree have total degree `d + 1`, so
/// learners must be run with degree bound at least `d + 1`.
pub fn gen_lower_bound_instance(n: usize, d: usize, h: usize, seed: u64) -> Result<Digraph, GenError> {
    if d < 2 || h < 1 {
        return Err(GenError::InfeasibleSpec(format!("need d >= 2 and h >= 1, got d = {d}, h = {h}")));
    }
    let caterpillar = 2 * h + 1;
    if n < caterpillar + 1 {
        return Err(GenError::InfeasibleSpec(format!(
            "n = {n} leaves no room for the d-ary tree below a height-{h} caterpillar ({caterpillar} vertices)"
        )));
    }
    // Spine p_i = i, leg l_i = h + 1 + i, d-ary tree in heap order from p_h.
    let mut edges: Vec<Edge> = Vec::with_capacity(n);
    for i in 0..h {
        edges.push((VertexId::new(i), VertexId::new(i + 1)));
        edges.push((VertexId::new(i), VertexId::new(h + 1 + i)));
    }
    let tree: Vec<usize> = std::iter::once(h).chain(caterpillar..n).collect();
    for k in 1..tree.len() {
        edges.push((VertexId::new(tree[(k - 1) / d]), VertexId::new(tree[k])));
    }
    let leaves: Vec<usize> = (0..tree.len()).filter(|&k| d * k + 1 >= tree.len()).map(|k| tree[k]).collect();

    let mut rng = rng_from_seed(seed);
    let leg = h + 1 + rng.gen_range(0..h);
    let leaf = *leaves.choose(&mut rng).expect("tree has a leaf");
    edges.push((VertexId::new(leg), VertexId::new(leaf)));
    let perm = random_permutation(n, &mut rng);
    Ok(permuted(n, &edges, &perm))
}

/// Random undirected tree on `n` vertices with degree at most `d`.
pub fn gen_undirected_tree(n: usize, d: usize, seed: u64) -> Result<UndirectedTree, GenError> {
    if n == 0 || d < 2 && n > 2 {
        return Err(GenError::InfeasibleSpec(format!("no tree with n = {n}, degree <= {d}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut deg = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n - 1);
    for x in 1..n {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        edges.push((p, x));
        deg[p] += 1;
        deg[x] += 1;
        if deg[p] == d {
            open.swap_remove(slot);
        }
        if deg[x] < d {
            open.push(x);
        }
    }
    let perm = random_permutation(n, &mut rng);
    let tree = UndirectedTree::from_edges(n, edges.into_iter().map(|(a, b)| (perm[a], perm[b])))
        .expect("attachment yields a tree");
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{classify, v};

    #[test]
    fn small_tree_shapes() {
        let star = gen_rooted_tree(&GenSpec::new(4, 3, 1, 0)).unwrap();
        let mut outs: Vec<_> = star.vertices().map(|x| star.out_degree(x)).collect();
        outs.sort_unstable();
        assert_eq!(outs, vec![0, 0, 0, 3]);
        let path = gen_rooted_tree(&GenSpec::new(4, 2, 3, 0)).unwrap();
        assert!(path.vertices().all(|x| path.out_degree(x) <= 1));
        assert_eq!(classify(&path).height, 3);
    }

    #[test]
    fn medium_tree_matches_classify() {
        let g = gen_rooted_tree(&GenSpec::new(100, 4, 7, 1)).unwrap();
        let r = classify(&g);
        assert!(r.is_arborescence);
        assert_eq!(r.height, 7);
        assert!(r.max_degree <= 4);
    }

    #[test]
    fn infeasible_trees() {
        assert!(matches!(gen_rooted_tree(&GenSpec::new(3, 2, 3, 0)), Err(GenError::InfeasibleSpec(_))));
        assert!(matches!(gen_rooted_tree(&GenSpec::new(64, 2, 10, 0)), Err(GenError::InfeasibleSpec(_))));
        assert_eq!(max_tree_size(2, 3), 7);
        assert_eq!(max_tree_size(3, 2), 10);
    }

    #[test]
    fn multitree_cases() {
        let one = gen_multitree(&GenSpec::new(30, 3, 5, 2)).unwrap();
        assert!(classify(&one).is_arborescence);
        let none = gen_multitree(&GenSpec::new(5, 3, 2, 2).with_roots(5)).unwrap();
        assert_eq!(none.edge_count(), 0);
        let g = gen_multitree(&GenSpec::new(60, 4, 6, 7).with_roots(3)).unwrap();
        let r = classify(&g);
        assert!(r.is_multitree && !r.has_transitive_edge);
        assert_eq!(r.roots.len(), 3);
        assert!(r.max_degree <= 4);
    }

    #[test]
    fn butterfly_sizes() {
        assert_eq!(gen_butterfly(0).vertex_count(), 1);
        let f1 = gen_butterfly(1);
        assert_eq!(f1.edge_set(), [(0, 2), (0, 3), (1, 2), (1, 3)].map(|(a, b)| (v(a), v(b))).into_iter().collect());
        assert_eq!(gen_butterfly(4).vertex_count(), 80);
        let f2 = classify(&gen_butterfly(2));
        assert_eq!((f2.n, f2.roots.len(), f2.max_degree), (12, 4, 4));
        assert!(f2.is_multitree);
        assert_eq!(butterfly_depth(80), Some(4));
        assert_eq!(butterfly_depth(81), None);
    }

    #[test]
    fn butterfly_degrees() {
        let g = gen_butterfly(3);
        let sinks = g.vertices().filter(|&x| g.out_degree(x) == 0).count();
        assert_eq!((g.roots().len(), sinks), (8, 8));
        for x in g.vertices() {
            assert!(g.out_degree(x) == 0 || g.out_degree(x) == 2);
            assert!(g.in_degree(x) == 0 || g.in_degree(x) == 2);
        }
    }

    #[test]
    fn almost_trees_are_valid() {
        for seed in 0..40 {
            let spec = GenSpec::new(40, 3, 6, seed);
            let g = gen_almost_tree(&spec).unwrap();
            let r = classify(&g);
            assert!(r.is_almost_tree && !r.has_transitive_edge, "seed {seed}: {r:?}");
            assert!(r.max_degree <= 3);
        }
    }

    #[test]
    fn cross_edge_validity_by_hand() {
        // r=0 -> a=1, r -> b=2, a -> c=3
        let g = Digraph::from_edges(4, [(v(0), v(1)), (v(0), v(2)), (v(1), v(3))]).unwrap();
        let anc = closed_ancestors(&g);
        assert!(valid_cross(&g, &anc, 2, 3, 3));
        assert!(!valid_cross(&g, &anc, 0, 3, 3));
        assert!(!valid_cross(&g, &anc, 3, 1, 3));
    }

    #[test]
    fn lower_bound_instance() {
        let g = gen_lower_bound_instance(20, 2, 3, 5).unwrap();
        let r = classify(&g);
        assert_eq!(r.n, 20);
        assert!(r.is_almost_tree && !r.has_transitive_edge);
        assert!(r.height >= 3);
    }

    #[test]
    fn determinism() {
        let spec = GenSpec::new(200, 3, 12, 99).with_roots(3);
        assert_eq!(gen_multitree(&spec).unwrap(), gen_multitree(&spec).unwrap());
        assert_eq!(gen_almost_tree(&spec).unwrap(), gen_almost_tree(&spec).unwrap());
        assert_eq!(gen_undirected_tree(50, 3, 4).unwrap().edges(), gen_undirected_tree(50, 3, 4).unwrap().edges());
    }
}
