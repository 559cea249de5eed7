use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pql::bench::{self, Alg, GraphClass, SweepConfig, CSV_HEADER};
use pql::dag_learn::LearnerConfig;
use pql::generators::{butterfly_size, GenSpec};
use pql::graph::{classify, io as gio, Digraph, GraphClassReport, VertexId};

const SEED_ENV: &str = "PQL_SEED";

#[derive(Parser)]
#[command(name = "pql", version, about = "Learn hidden graphs from path queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance and write it as JSON (or CSV) plus a `.meta.json` sidecar.
    Generate(GenerateArgs),
    /// Run a learner against an oracle built from a graph file; prints JSON.
    Learn(LearnArgs),
    /// Compare a learner's output with a ground-truth graph; prints JSON.
    Verify(VerifyArgs),
    /// Run seeded trials over a range of sizes and write the aggregate CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_class)]
    class: GraphClass,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 8)]
    h: usize,
    #[arg(long, default_value_t = 1)]
    a: usize,
    /// Overridden by PQL_SEED.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct LearnerArgs {
    #[arg(long, default_value_t = 6.0)]
    c1: f64,
    #[arg(long, default_value_t = 32.0)]
    c2: f64,
    /// Degree bound; defaults to 4 for butterflies and 3 otherwise.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 2)]
    c_paths: usize,
    /// Defaults to max(16, d + 2).
    #[arg(long)]
    g_base: Option<usize>,
    #[arg(long, default_value_t = 4)]
    eps_cap: usize,
    /// Defaults to 64 * d.
    #[arg(long)]
    loop_cap: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    butterfly_c: f64,
}

impl LearnerArgs {
    fn config(&self, default_d: usize, seed: u64) -> LearnerConfig {
        let d = self.d.unwrap_or(default_d);
        let base = LearnerConfig::new(d);
        LearnerConfig {
            c1: self.c1,
            c2: self.c2,
            c_paths: self.c_paths,
            g_base: self.g_base.unwrap_or(base.g_base),
            eps_cap: self.eps_cap,
            loop_cap: self.loop_cap,
            butterfly_c: self.butterfly_c,
            seed,
            ..base
        }
    }
}

#[derive(Args)]
struct LearnArgs {
    #[arg(long, value_parser = parse_alg)]
    alg: Alg,
    #[arg(long, short)]
    input: PathBuf,
    /// Vertex whose parent `--alg parent` looks for (default: highest id).
    #[arg(long)]
    vertex: Option<u32>,
    /// Overridden by PQL_SEED.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground truth to check the result against; sets `verified`.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[command(flatten)]
    learner: LearnerArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Output of `pql learn`, or any JSON with an `edges` list.
    #[arg(long)]
    learned: PathBuf,
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_alg)]
    alg: Alg,
    #[arg(long, value_parser = parse_class)]
    class: GraphClass,
    /// `lo:hi` doubles from lo up to hi; `a,b,c` lists sizes. Ignored for butterflies.
    #[arg(long, default_value = "256:4096")]
    n: String,
    /// One height for every n, a list matching `--n`, `lo:hi` (butterflies), or
    /// `auto` for 2 ceil(log2 n).
    #[arg(long, default_value = "auto")]
    h: String,
    #[arg(long, default_value_t = 1)]
    a: usize,
    /// Learner degree bound when it differs from the generator's `--d`
    /// (lower-bound instances need d + 1).
    #[arg(long)]
    learner_d: Option<usize>,
    #[arg(long, default_value_t = 30)]
    trials: usize,
    /// Trial i uses seed seed0 + i. Overridden by PQL_SEED.
    #[arg(long, default_value_t = 0)]
    seed0: u64,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
    /// Also write every trial record as JSON.
    #[arg(long)]
    records: Option<PathBuf>,
    #[command(flatten)]
    learner: LearnerArgs,
}

/// Exit status classes: usage or precondition problems, learner give-ups,
/// and a verification mismatch.
enum Failure {
    Usage(anyhow::Error),
    Learner(anyhow::Error),
    Mismatch,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn parse_alg(s: &str) -> Result<Alg, String> {
    s.parse()
}

fn parse_class(s: &str) -> Result<GraphClass, String> {
    s.parse()
}

fn seed_override(flag: u64) -> anyhow::Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{SEED_ENV}={v} is not a u64")),
        Err(_) => Ok(flag),
    }
}

fn read_graph(path: &Path) -> anyhow::Result<Digraph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let reader = BufReader::new(file);
    let g = if path.extension().is_some_and(|e| e == "csv") {
        gio::read_csv(reader, None)
    } else {
        gio::read_json(reader)
    };
    g.with_context(|| format!("reading graph {}", path.display()))
}

#[derive(Serialize, Deserialize)]
struct Metadata {
    class: GraphClass,
    spec: GenSpec,
    report: GraphClassReport,
}

fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let seed = seed_override(args.seed)?;
    let mut spec = GenSpec { n: args.n, d: args.d, h: args.h, a: args.a, seed };
    if args.class == GraphClass::Butterfly {
        spec.n = butterfly_size(args.h);
    }
    let g = bench::generate(args.class, &spec).map_err(|e| anyhow!(e))?;
    let out = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut out = BufWriter::new(out);
    if args.out.extension().is_some_and(|e| e == "csv") {
        gio::write_csv(&g, &mut out).map_err(|e| anyhow!(e))?;
    } else {
        gio::write_json(&g, &mut out).context("writing graph")?;
    }
    out.flush().context("writing graph")?;

    let meta = Metadata { class: args.class, spec, report: classify(&g) };
    let mut meta_path = args.out.clone().into_os_string();
    meta_path.push(".meta.json");
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    std::fs::write(&meta_path, text + "\n").with_context(|| format!("writing {meta_path:?}"))?;
    Ok(())
}

fn learn(args: LearnArgs) -> Result<(), Failure> {
    let seed = seed_override(args.seed)?;
    let g = read_graph(&args.input)?;
    let default_d = if args.alg == Alg::Butterfly { 4 } else { 3 };
    let cfg = args.learner.config(default_d, seed);
    let mut out = bench::run_learner(args.alg, &g, &cfg, args.vertex.map(VertexId)).map_err(|e| {
        let err = anyhow!(e.clone()).context(format!("{} failed", args.alg));
        if e.is_cap_exceeded() {
            Failure::Learner(err)
        } else {
            Failure::Usage(err)
        }
    })?;
    if let Some(path) = &args.truth {
        let truth = read_graph(path)?;
        out.verified = Some(bench::check(&truth, &out));
    }
    print_json(&out)?;
    Ok(())
}

/// Accepts full `LearnOutput` files and bare `{"edges": [...]}` objects.
#[derive(Deserialize)]
struct LearnedFile {
    #[serde(default)]
    alg: Option<Alg>,
    edges: Vec<(VertexId, VertexId)>,
    #[serde(default)]
    root: Option<VertexId>,
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.learned).with_context(|| format!("reading {}", args.learned.display()))?;
    let learned: LearnedFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", args.learned.display()))?;
    let truth = read_graph(&args.truth)?;
    let undirected = learned.alg == Some(Alg::UndirectedTree);
    let report = bench::verify(&learned.edges, learned.root, &truth, undirected);
    print_json(&report)?;
    if report.exact {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn parse_sizes(s: &str) -> anyhow::Result<Vec<usize>> {
    if let Some((lo, hi)) = s.split_once(':') {
        let (lo, hi): (usize, usize) = (lo.trim().parse()?, hi.trim().parse()?);
        if lo == 0 || lo > hi {
            bail!("bad range {s}");
        }
        Ok(std::iter::successors(Some(lo), |&x| Some(x * 2)).take_while(|&x| x <= hi).collect())
    } else {
        s.split(',').map(|x| Ok(x.trim().parse()?)).collect()
    }
}

fn parse_heights(s: &str) -> anyhow::Result<Vec<usize>> {
    if let Some((lo, hi)) = s.split_once(':') {
        let (lo, hi): (usize, usize) = (lo.trim().parse()?, hi.trim().parse()?);
        if lo > hi {
            bail!("bad range {s}");
        }
        Ok((lo..=hi).collect())
    } else {
        s.split(',').map(|x| Ok(x.trim().parse()?)).collect()
    }
}

fn sweep_points(args: &SweepArgs) -> anyhow::Result<Vec<(usize, usize, usize)>> {
    if args.class == GraphClass::Butterfly {
        return Ok(bench::butterfly_points(parse_heights(&args.h)?));
    }
    let ns = parse_sizes(&args.n)?;
    let hs: Vec<usize> = if args.h == "auto" {
        ns.iter().map(|&n| 2 * (n as f64).log2().ceil() as usize).collect()
    } else {
        let hs = parse_heights(&args.h)?;
        match hs.len() {
            1 => vec![hs[0]; ns.len()],
            k if k == ns.len() => hs,
            k => bail!("{k} heights for {} sizes", ns.len()),
        }
    };
    Ok(ns.into_iter().zip(hs).map(|(n, h)| (n, h, args.a)).collect())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let seed0 = seed_override(args.seed0)?;
    let points = sweep_points(&args)?;
    let gen_d = args.learner.d.unwrap_or(if args.class == GraphClass::Butterfly { 4 } else { 3 });
    let mut learner = args.learner.config(gen_d, 0);
    if let Some(d) = args.learner_d {
        learner = LearnerArgs { d: Some(d), ..args.learner.clone() }.config(d, 0);
    }
    learner.validate().map_err(|e| anyhow!(e))?;
    let cfg = SweepConfig { alg: args.alg, class: args.class, points, d: gen_d, trials: args.trials, seed0, learner };

    let sink: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout()),
    };
    // Rows are flushed as they finish so an interrupted sweep keeps what it has.
    let mut csv = csv::Writer::from_writer(sink);
    csv.write_record(CSV_HEADER).context("writing CSV")?;
    csv.flush().context("writing CSV")?;
    let mut write_err = None;
    let report = bench::run_sweep(&cfg, |row| {
        if let Err(e) = csv.write_record(row.csv_fields()).and_then(|_| csv.flush().map_err(Into::into)) {
            write_err.get_or_insert(e);
        }
    })
    .map_err(|e| anyhow!(e))?;
    if let Some(e) = write_err {
        return Err(anyhow!(e).context("writing CSV").into());
    }

    if let Some(path) = &args.gnuplot {
        let csv_name = args.out.as_deref().map_or("sweep.csv".into(), |p| p.display().to_string());
        std::fs::write(path, report.gnuplot_script(&csv_name)).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.records {
        let text = serde_json::to_string_pretty(&report.records).expect("records serialize");
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value).context("writing JSON")?;
    writeln!(stdout).context("writing JSON")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Generate(a) => generate(a),
        Cmd::Learn(a) => learn(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Learner(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
