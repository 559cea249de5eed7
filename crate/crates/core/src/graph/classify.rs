use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{transitive_reduction, Digraph, ReachabilityIndex, VertexId};

/// Path multiplicities saturate here; only small thresholds matter downstream.
pub const PATH_COUNT_CAP: u64 = 1 << 16;

/// Structural facts about a graph, relative to every class the learners handle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClassReport {
    pub n: usize,
    pub edges: usize,
    pub is_dag: bool,
    pub roots: Vec<VertexId>,
    /// Max over vertices of in-degree plus out-degree.
    pub max_degree: usize,
    /// Length (in edges) of the longest directed path; 0 for non-DAGs.
    pub height: usize,
    pub is_arborescence: bool,
    pub is_multitree: bool,
    pub is_almost_tree: bool,
    pub has_transitive_edge: bool,
    /// Max over `v` of the number of distinct root-to-`v` paths, saturated at the cap.
    pub max_root_paths: u64,
}

pub fn classify(g: &Digraph) -> GraphClassReport {
    classify_with_cap(g, PATH_COUNT_CAP)
}

pub fn classify_with_cap(g: &Digraph, cap: u64) -> GraphClassReport {
    let n = g.vertex_count();
    let roots = g.roots();
    let max_degree = g.vertices().map(|x| g.degree(x)).max().unwrap_or(0);
    let mut report = GraphClassReport {
        n,
        edges: g.edge_count(),
        is_dag: false,
        roots,
        max_degree,
        height: 0,
        is_arborescence: false,
        is_multitree: false,
        is_almost_tree: false,
        has_transitive_edge: false,
        max_root_paths: 0,
    };
    let Some(order) = g.topological_order() else {
        return report;
    };
    report.is_dag = true;

    let mut longest = vec![0usize; n];
    let mut paths = vec![0u64; n];
    for &x in &order {
        if g.in_degree(x) == 0 {
            paths[x.index()] = 1;
        }
        for &y in g.out_neighbors(x) {
            longest[y.index()] = longest[y.index()].max(longest[x.index()] + 1);
            paths[y.index()] = (paths[y.index()] + paths[x.index()]).min(cap);
        }
    }
    report.height = longest.iter().copied().max().unwrap_or(0);
    report.max_root_paths = paths.iter().copied().max().unwrap_or(0);

    let reach = ReachabilityIndex::build_dag(g).expect("checked acyclic above");
    report.is_multitree = children_closures_disjoint(g, &reach);
    report.has_transitive_edge = transitive_reduction(g)
        .map(|red| red.edge_count() < g.edge_count())
        .unwrap_or(false);

    let single_root = report.roots.len() == 1;
    report.is_arborescence = single_root && g.edge_count() + 1 == n;
    // A single-rooted DAG with n edges has exactly one vertex of in-degree two,
    // and dropping either of its in-edges leaves an arborescence.
    report.is_almost_tree = single_root && g.edge_count() == n;
    report
}

/// True iff no vertex has two children whose closed descendant sets meet,
/// which is exactly "at most one directed path between any ordered pair".
fn children_closures_disjoint(g: &Digraph, reach: &ReachabilityIndex) -> bool {
    let n = g.vertex_count();
    let mut seen = FixedBitSet::with_capacity(n);
    for x in g.vertices() {
        if g.out_degree(x) < 2 {
            continue;
        }
        seen.clear();
        for &c in g.out_neighbors(x) {
            let mut closed = reach.row(c).clone();
            closed.insert(c.index());
            if !seen.is_disjoint(&closed) {
                return false;
            }
            seen.union_with(&closed);
        }
    }
    true
}
