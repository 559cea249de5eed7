//! Instance generation by class, learner dispatch, ground-truth checks, and
//! seeded sweeps with doubling-ratio tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dag_learn::{learn_almost_tree, learn_cross_edge, learn_parent, learn_root, learn_spanning_tree, LearnerConfig};
use crate::error::LearnError;
use crate::generators::{
    butterfly_size, gen_almost_tree, gen_butterfly_shuffled, gen_lower_bound_instance, gen_multitree,
    gen_rooted_tree, gen_undirected_tree, rng_from_seed, GenError, GenSpec,
};
use crate::graph::{classify, undirected, ArborescenceMetrics, Digraph, Edge, GraphClassReport, UndirectedTree, VertexId};
use crate::multitree_learn::{learn_butterfly, learn_multitree};
use crate::oracle::{LedgerSnapshot, PathOracle, ReachabilityOracle, SeparatorOracle, TreeSeparatorOracle};
use crate::tree_learn::{brute_force_learn, learn_short_tree, learn_undirected_tree, sequential_find_root, UndirectedMethod};

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $label)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                $name::ALL.iter().copied().find(|x| x.name() == s).ok_or_else(|| {
                    let names: Vec<_> = $name::ALL.iter().map(|x| x.name()).collect();
                    format!("unknown {} `{s}`; expected one of: {}", stringify!($name), names.join(", "))
                })
            }
        }
    };
}

named_enum! {
    /// Learners reachable from the CLI and the sweep runner.
    Alg {
        ShortTree => "short-tree",
        UndirectedTree => "undirected-tree",
        Root => "root",
        Parent => "parent",
        SpanningTree => "spanning-tree",
        CrossEdge => "cross-edge",
        AlmostTree => "almost-tree",
        Multitree => "multitree",
        Butterfly => "butterfly",
        BruteForce => "brute-force",
    }
}

named_enum! {
    /// Instance families.
    GraphClass {
        Tree => "tree",
        Multitree => "multitree",
        Butterfly => "butterfly",
        AlmostTree => "almost-tree",
        LowerBound => "lower-bound",
        Undirected => "undirected",
    }
}

/// Generates one instance. Butterflies use `spec.h` only; undirected trees
/// come back with each edge stored once, smaller id first.
pub fn generate(class: GraphClass, spec: &GenSpec) -> Result<Digraph, GenError> {
    match class {
        GraphClass::Tree => gen_rooted_tree(spec),
        GraphClass::Multitree => gen_multitree(spec),
        GraphClass::Butterfly => Ok(gen_butterfly_shuffled(spec.h, spec.seed)),
        GraphClass::AlmostTree => gen_almost_tree(spec),
        GraphClass::LowerBound => gen_lower_bound_instance(spec.n, spec.d, spec.h, spec.seed),
        GraphClass::Undirected => {
            let t = gen_undirected_tree(spec.n, spec.d, spec.seed)?;
            Ok(Digraph::from_edges(spec.n, t.edges()).expect("tree edges are simple"))
        }
    }
}

/// What a learner produced, in one shape for every algorithm. Fields that do
/// not apply to an algorithm are omitted from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnOutput {
    pub alg: Alg,
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_root_trees: Option<BTreeMap<VertexId, Vec<Edge>>>,
    /// `parent`: the vertex whose parent was asked for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<VertexId>,
    /// `cross-edge`: the arborescence the cross edge completes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arborescence: Option<Vec<Edge>>,
    pub ledger: LedgerSnapshot,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

impl LearnOutput {
    fn new(alg: Alg, n: usize, edges: Vec<Edge>, ledger: LedgerSnapshot) -> Self {
        LearnOutput {
            alg,
            n,
            edges,
            root: None,
            roots: None,
            per_root_trees: None,
            target: None,
            arborescence: None,
            ledger,
            verified: None,
        }
    }
}

/// Runs `alg` against an oracle built from `hidden`. The learner sees only
/// the oracle; `hidden` is not consulted afterwards. `target` is the vertex
/// for `parent` (default: highest id).
pub fn run_learner(
    alg: Alg,
    hidden: &Digraph,
    cfg: &LearnerConfig,
    target: Option<VertexId>,
) -> Result<LearnOutput, LearnError> {
    cfg.validate()?;
    let n = hidden.vertex_count();
    if alg == Alg::UndirectedTree {
        let tree = UndirectedTree::from_digraph(hidden)
            .map_err(|e| LearnError::PreconditionViolated(format!("input is not an undirected tree: {e}")))?;
        let sep = TreeSeparatorOracle::new(&tree);
        let method = UndirectedMethod::ShortTree { d: cfg.d };
        let edges = learn_undirected_tree(&sep, method)?.into_iter().collect();
        return Ok(LearnOutput::new(alg, n, edges, sep.ledger().snapshot()));
    }
    let oracle = ReachabilityOracle::from_graph(hidden);
    run_on_oracle(alg, &oracle, cfg, target)
}

/// [`run_learner`] against any path oracle over `0..vertex_count`.
pub fn run_on_oracle(
    alg: Alg,
    oracle: &dyn PathOracle,
    cfg: &LearnerConfig,
    target: Option<VertexId>,
) -> Result<LearnOutput, LearnError> {
    let n = oracle.vertex_count();
    let vs: Vec<VertexId> = (0..n).map(VertexId::new).collect();
    let mut rng = rng_from_seed(cfg.seed);
    let snap = |o: &dyn PathOracle| o.ledger().snapshot();
    let out = match alg {
        Alg::ShortTree => {
            let r = sequential_find_root(&vs, oracle)?;
            let edges = learn_short_tree(&vs, r, cfg.d, oracle)?;
            let mut out = LearnOutput::new(alg, n, sorted(edges), snap(oracle));
            out.root = Some(r);
            out
        }
        Alg::Root => {
            let r = learn_root(&vs, oracle, cfg, &mut rng)?;
            LearnOutput { root: Some(r), ..LearnOutput::new(alg, n, Vec::new(), snap(oracle)) }
        }
        Alg::Parent => {
            let v = target.unwrap_or_else(|| VertexId::new(n.saturating_sub(1)));
            if v.index() >= n {
                return Err(LearnError::PreconditionViolated(format!("vertex {v} out of range")));
            }
            let p = learn_parent(v, &vs, oracle, cfg, &mut rng)?;
            LearnOutput { target: Some(v), ..LearnOutput::new(alg, n, vec![(p, v)], snap(oracle)) }
        }
        Alg::SpanningTree => {
            let r = {
                let _p = oracle.ledger().phase("root");
                learn_root(&vs, oracle, cfg, &mut rng)?
            };
            let edges = {
                let _p = oracle.ledger().phase("spanning_tree");
                learn_spanning_tree(&vs, r, oracle, cfg, &mut rng)?
            };
            LearnOutput { root: Some(r), ..LearnOutput::new(alg, n, edges, snap(oracle)) }
        }
        Alg::AlmostTree => {
            let res = learn_almost_tree(&vs, oracle, cfg, &mut rng)?;
            LearnOutput { root: res.root, ..LearnOutput::new(alg, n, res.edges, res.ledger) }
        }
        Alg::CrossEdge => {
            let ledger = oracle.ledger();
            let r = {
                let _p = ledger.phase("root");
                learn_root(&vs, oracle, cfg, &mut rng)?
            };
            let arb = {
                let _p = ledger.phase("spanning_tree");
                learn_spanning_tree(&vs, r, oracle, cfg, &mut rng)?
            };
            let cross = {
                let _p = ledger.phase("cross_edge");
                learn_cross_edge(&vs, &arb, oracle)?
            };
            LearnOutput {
                root: Some(r),
                arborescence: Some(arb),
                ..LearnOutput::new(alg, n, vec![cross], snap(oracle))
            }
        }
        Alg::Multitree => {
            let res = learn_multitree(&vs, oracle, cfg, &mut rng)?;
            let mut out = LearnOutput::new(alg, n, res.edges, res.ledger);
            out.roots = Some(res.roots);
            out.per_root_trees = Some(res.per_root_trees);
            out
        }
        Alg::Butterfly => {
            let res = learn_butterfly(&vs, oracle, cfg, &mut rng)?;
            LearnOutput::new(alg, n, res.edges, res.ledger)
        }
        Alg::BruteForce => {
            let edges = brute_force_learn(&vs, oracle)?;
            LearnOutput::new(alg, n, sorted(edges), snap(oracle))
        }
        Alg::UndirectedTree => {
            return Err(LearnError::PreconditionViolated("undirected-tree needs a separator oracle".into()))
        }
    };
    Ok(out)
}

fn sorted(mut edges: Vec<Edge>) -> Vec<Edge> {
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Checks a learner's output against the hidden graph.
pub fn check(hidden: &Digraph, out: &LearnOutput) -> bool {
    let truth = hidden.edge_set();
    let learned: BTreeSet<Edge> = out.edges.iter().copied().collect();
    match out.alg {
        Alg::ShortTree | Alg::AlmostTree | Alg::Multitree | Alg::Butterfly | Alg::BruteForce => {
            learned == truth && out.root.is_none_or(|r| hidden.in_degree(r) == 0)
        }
        Alg::UndirectedTree => {
            let norm = |s: &BTreeSet<Edge>| s.iter().map(|&(a, b)| undirected(a, b)).collect::<BTreeSet<_>>();
            norm(&learned) == norm(&truth)
        }
        Alg::Root => out.root.is_some_and(|r| r.index() < hidden.vertex_count() && hidden.in_degree(r) == 0),
        Alg::Parent => out.edges.len() == 1 && truth.contains(&out.edges[0]),
        Alg::SpanningTree => {
            let Some(r) = out.root else { return false };
            learned.is_subset(&truth)
                && ArborescenceMetrics::new(&out.edges, r).is_ok_and(|m| m.len() == hidden.vertex_count())
        }
        Alg::CrossEdge => {
            let arb = out.arborescence.clone().unwrap_or_default();
            let all: BTreeSet<Edge> = arb.into_iter().chain(out.edges.iter().copied()).collect();
            all == truth && out.edges.len() == 1
        }
    }
}

/// Result of comparing a learned edge set with a ground-truth graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub exact: bool,
    pub missing: Vec<Edge>,
    pub extra: Vec<Edge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_ok: Option<bool>,
    pub class: GraphClassReport,
}

/// Set equality of edges (orientation ignored when `undirected`), plus the
/// root's in-degree when a root is given.
pub fn verify(learned: &[Edge], root: Option<VertexId>, truth: &Digraph, undirected_edges: bool) -> VerifyReport {
    let norm = |e: Edge| if undirected_edges { undirected(e.0, e.1) } else { e };
    let got: BTreeSet<Edge> = learned.iter().map(|&e| norm(e)).collect();
    let want: BTreeSet<Edge> = truth.edges().map(norm).collect();
    let missing: Vec<Edge> = want.difference(&got).copied().collect();
    let extra: Vec<Edge> = got.difference(&want).copied().collect();
    let root_ok = root.map(|r| r.index() < truth.vertex_count() && truth.in_degree(r) == 0);
    VerifyReport {
        exact: missing.is_empty() && extra.is_empty() && root_ok != Some(false),
        missing,
        extra,
        root_ok,
        class: classify(truth),
    }
}

/// One learner run on one generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub alg: Alg,
    pub class: GraphClass,
    pub spec: GenSpec,
    pub seed: u64,
    pub n: usize,
    pub queries: u64,
    pub raw_queries: u64,
    pub rounds: u64,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub cap_exceeded: bool,
    pub wall_ms: f64,
}

/// Generates `class` from `spec`, runs `alg` with the learner seeded by
/// `spec.seed`, and checks the result. For `cross-edge` the counters cover
/// the cross-edge phase only.
pub fn run_trial(alg: Alg, class: GraphClass, spec: &GenSpec, cfg: &LearnerConfig) -> Result<BenchRecord, GenError> {
    let hidden = generate(class, spec)?;
    let start = Instant::now();
    let outcome = run_learner(alg, &hidden, &cfg.with_seed(spec.seed), None);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut rec = BenchRecord {
        alg,
        class,
        spec: *spec,
        seed: spec.seed,
        n: hidden.vertex_count(),
        queries: 0,
        raw_queries: 0,
        rounds: 0,
        exact: false,
        error: None,
        cap_exceeded: false,
        wall_ms,
    };
    match outcome {
        Ok(out) => {
            rec.exact = check(&hidden, &out);
            let l = &out.ledger;
            (rec.queries, rec.raw_queries, rec.rounds) = match (alg, l.phases.get("cross_edge")) {
                (Alg::CrossEdge, Some(p)) => (p.queries, p.queries, p.batches),
                _ => (l.queries, l.raw_queries, l.rounds),
            };
        }
        Err(e) => {
            rec.cap_exceeded = e.is_cap_exceeded();
            rec.error = Some(e.to_string());
        }
    }
    Ok(rec)
}

/// Growth law a sweep is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetCurve {
    #[serde(rename = "n*h")]
    NH,
    #[serde(rename = "n*log n")]
    NLogN,
    #[serde(rename = "a*n*log n")]
    ANLogN,
    #[serde(rename = "2^(3h/2)*h^2")]
    Butterfly,
}

impl TargetCurve {
    pub fn for_alg(alg: Alg) -> Self {
        match alg {
            Alg::ShortTree | Alg::UndirectedTree | Alg::CrossEdge => TargetCurve::NH,
            Alg::Multitree => TargetCurve::ANLogN,
            Alg::Butterfly => TargetCurve::Butterfly,
            _ => TargetCurve::NLogN,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TargetCurve::NH => "n*h",
            TargetCurve::NLogN => "n*log n",
            TargetCurve::ANLogN => "a*n*log n",
            TargetCurve::Butterfly => "2^(3h/2)*h^2",
        }
    }

    /// Curve value at a sweep point.
    pub fn value(self, n: usize, h: usize, a: usize) -> f64 {
        let n = n as f64;
        match self {
            TargetCurve::NH => n * h.max(1) as f64,
            TargetCurve::NLogN => n * n.max(2.0).log2(),
            TargetCurve::ANLogN => a.max(1) as f64 * n * n.max(2.0).log2(),
            TargetCurve::Butterfly => 2f64.powf(1.5 * h as f64) * (h.max(1) as f64).powi(2),
        }
    }
}

/// Aggregates over the trials of one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub h: usize,
    pub a: usize,
    pub median_q: f64,
    pub p95_q: f64,
    pub median_rounds: f64,
    pub success_rate: f64,
    /// `median_q` over the previous row's `median_q`.
    pub ratio: Option<f64>,
    /// The same ratio for the target curve.
    pub target_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub alg: Alg,
    pub class: GraphClass,
    pub target: TargetCurve,
    pub rows: Vec<SweepRow>,
    pub records: Vec<BenchRecord>,
}

/// Sweep points and trial settings. Trial `i` at every point uses seed `seed0 + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub alg: Alg,
    pub class: GraphClass,
    /// `(n, h, a)` per point; butterflies ignore `n`.
    pub points: Vec<(usize, usize, usize)>,
    /// Degree bound used by the generator.
    pub d: usize,
    pub trials: usize,
    pub seed0: u64,
    pub learner: LearnerConfig,
}

/// Runs every trial (in parallel across trials) and aggregates per point.
/// `on_row` sees each row as soon as its point is finished.
pub fn run_sweep(cfg: &SweepConfig, mut on_row: impl FnMut(&SweepRow)) -> Result<SweepReport, GenError> {
    let target = TargetCurve::for_alg(cfg.alg);
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut records = Vec::new();
    for &(n, h, a) in &cfg.points {
        let recs: Vec<BenchRecord> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| {
                let spec = GenSpec { n, d: cfg.d, h, a, seed: cfg.seed0 + i };
                run_trial(cfg.alg, cfg.class, &spec, &cfg.learner)
            })
            .collect::<Result<_, _>>()?;
        let n_actual = recs.first().map_or(n, |r| r.n);
        let mut row = aggregate(n_actual, h, a, &recs);
        if let Some(prev) = rows.last() {
            row.ratio = Some(row.median_q / prev.median_q);
            row.target_ratio = Some(target.value(row.n, h, a) / target.value(prev.n, prev.h, prev.a));
        }
        on_row(&row);
        rows.push(row);
        records.extend(recs);
    }
    Ok(SweepReport { alg: cfg.alg, class: cfg.class, target, rows, records })
}

fn aggregate(n: usize, h: usize, a: usize, recs: &[BenchRecord]) -> SweepRow {
    let ok: Vec<&BenchRecord> = recs.iter().filter(|r| r.error.is_none()).collect();
    let qs: Vec<f64> = ok.iter().map(|r| r.queries as f64).collect();
    let rs: Vec<f64> = ok.iter().map(|r| r.rounds as f64).collect();
    SweepRow {
        n,
        h,
        a,
        median_q: quantile(&qs, 0.5),
        p95_q: quantile(&qs, 0.95),
        median_rounds: quantile(&rs, 0.5),
        success_rate: recs.iter().filter(|r| r.exact).count() as f64 / recs.len().max(1) as f64,
        ratio: None,
        target_ratio: None,
    }
}

/// Median is the mean of the two middle values; other quantiles use the
/// nearest-rank rule. NaN on empty input.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    if q == 0.5 {
        let m = v.len() / 2;
        return if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 };
    }
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

pub const CSV_HEADER: [&str; 8] = ["n", "h", "a", "median_q", "p95_q", "median_rounds", "success_rate", "ratio"];

impl SweepRow {
    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.h.to_string(),
            self.a.to_string(),
            format!("{}", self.median_q),
            format!("{}", self.p95_q),
            format!("{}", self.median_rounds),
            format!("{}", self.success_rate),
            self.ratio.map(|r| format!("{r:.4}")).unwrap_or_default(),
        ]
    }
}

impl SweepReport {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER)?;
        for row in &self.rows {
            out.write_record(row.csv_fields())?;
        }
        out.flush()?;
        Ok(())
    }

    /// Rows whose ratio lies outside `[lo, hi]`.
    pub fn ratio_violations(&self, lo: f64, hi: f64) -> Vec<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.ratio.is_some_and(|x| !(lo..=hi).contains(&x)))
            .collect()
    }

    /// Gnuplot script plotting `median_q` against the target curve, scaled to
    /// agree at the first point, reading `csv_path`.
    pub fn gnuplot_script(&self, csv_path: &str) -> String {
        let first = self.rows.first();
        let scale = first.map_or(1.0, |r| r.median_q / self.target.value(r.n, r.h, r.a));
        let curve: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("{} {}", r.n, scale * self.target.value(r.n, r.h, r.a)))
            .collect();
        format!(
            "set datafile separator ','\nset logscale xy\nset key left top\nset xlabel 'n'\nset ylabel 'queries'\n\
             set title '{alg} on {class}'\n$target << EOD\n{curve}\nEOD\n\
             plot '{csv_path}' using 1:4 skip 1 with linespoints title 'median queries', \\\n     \
             $target using 1:2 with lines title '{label} (scaled)'\n",
            alg = self.alg,
            class = self.class,
            curve = curve.join("\n"),
            label = self.target.label(),
        )
    }
}

/// Vertex count of a butterfly of depth `h`, for building sweep points.
pub fn butterfly_points(hs: impl IntoIterator<Item = usize>) -> Vec<(usize, usize, usize)> {
    hs.into_iter().map(|h| (butterfly_size(h), h, 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::v;

    #[test]
    fn names_round_trip() {
        for &a in Alg::ALL {
            assert_eq!(a.name().parse::<Alg>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{}\"", a.name()));
        }
        for &c in GraphClass::ALL {
            assert_eq!(c.name().parse::<GraphClass>().unwrap(), c);
        }
        assert!("bogus".parse::<Alg>().unwrap_err().contains("short-tree"));
    }

    #[test]
    fn quantiles() {
        assert_eq!(quantile(&[3.0, 1.0, 2.0], 0.5), 2.0);
        assert_eq!(quantile(&[4.0, 1.0, 2.0, 3.0], 0.5), 2.5);
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(quantile(&xs, 0.95), 95.0);
        assert!(quantile(&[], 0.5).is_nan());
    }

    #[test]
    fn every_alg_checks_out_on_a_small_instance() {
        let cfg = LearnerConfig::new(3);
        let at = generate(GraphClass::AlmostTree, &GenSpec::new(60, 3, 8, 2)).unwrap();
        let tree = generate(GraphClass::Tree, &GenSpec::new(60, 3, 8, 2)).unwrap();
        let und = generate(GraphClass::Undirected, &GenSpec::new(60, 3, 0, 2)).unwrap();
        for (alg, g) in [
            (Alg::ShortTree, &tree),
            (Alg::Root, &at),
            (Alg::Parent, &at),
            (Alg::SpanningTree, &at),
            (Alg::CrossEdge, &at),
            (Alg::AlmostTree, &at),
            (Alg::Multitree, &tree),
            (Alg::BruteForce, &at),
            (Alg::UndirectedTree, &und),
        ] {
            let out = run_learner(alg, g, &cfg, None).unwrap();
            assert!(check(g, &out), "{alg}");
        }
        let bf = generate(GraphClass::Butterfly, &GenSpec::new(0, 4, 3, 1)).unwrap();
        let out = run_learner(Alg::Butterfly, &bf, &LearnerConfig::new(4), None).unwrap();
        assert!(check(&bf, &out));
    }

    #[test]
    fn cross_edge_output_is_one_edge() {
        let g = Digraph::from_edges(4, [(v(0), v(1)), (v(0), v(2)), (v(1), v(3)), (v(2), v(3))]).unwrap();
        let out = run_learner(Alg::CrossEdge, &g, &LearnerConfig::new(3), None).unwrap();
        assert_eq!(out.edges.len(), 1);
        assert_eq!(out.arborescence.as_ref().unwrap().len(), 3);
        assert!(check(&g, &out));
    }

    #[test]
    fn verify_reports_diffs() {
        let g = Digraph::from_edges(3, [(v(0), v(1)), (v(1), v(2))]).unwrap();
        let r = verify(&[(v(0), v(1)), (v(1), v(2))], Some(v(0)), &g, false);
        assert!(r.exact);
        let r = verify(&[(v(0), v(1)), (v(2), v(1))], None, &g, false);
        assert!(!r.exact);
        assert_eq!(r.missing, vec![(v(1), v(2))]);
        assert_eq!(r.extra, vec![(v(2), v(1))]);
        assert!(verify(&[(v(1), v(0)), (v(2), v(1))], None, &g, true).exact);
        assert!(!verify(&[(v(0), v(1)), (v(1), v(2))], Some(v(1)), &g, false).exact);
    }

    #[test]
    fn sweep_is_deterministic_and_reports_ratios() {
        let cfg = SweepConfig {
            alg: Alg::ShortTree,
            class: GraphClass::Tree,
            points: vec![(128, 8, 1), (256, 8, 1)],
            d: 3,
            trials: 6,
            seed0: 10,
            learner: LearnerConfig::new(3),
        };
        let mut seen = 0;
        let a = run_sweep(&cfg, |_| seen += 1).unwrap();
        let b = run_sweep(&cfg, |_| {}).unwrap();
        assert_eq!(seen, 2);
        let strip = |r: &SweepReport| r.records.iter().map(|x| (x.seed, x.queries, x.rounds, x.exact)).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        assert!(a.rows[0].ratio.is_none());
        assert!(a.rows[1].ratio.unwrap() > 1.0);
        assert_eq!(a.rows[1].success_rate, 1.0);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,h,a,median_q,p95_q,median_rounds,success_rate,ratio\n"));
        assert!(a.gnuplot_script("out.csv").contains("plot 'out.csv'"));
    }
}
