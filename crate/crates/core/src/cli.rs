//! Command-line front end. Every command writes its tables plus a
//! `manifest.json` into `--out`; `replay` re-runs a manifest.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical or statistical
//! failure, 4 flow blow-up before the first snapshot.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::approx::{approx_effective_resistance, ApproxConfig};
use crate::curvature::CurvatureReport;
use crate::erg::monte_carlo_profile;
use crate::error::{Error, Result};
use crate::experiments::{er_sweep, log_grid, zero_crossing, SweepConfig};
use crate::export;
use crate::flow::{integrate, FlowKind, Halt, MergePolicy, StepControl};
use crate::generators::ErgConfig;
use crate::io::read_graph;
use crate::reference::{compare_links, OllivierSchedule};
use crate::resistance::effective_resistance;
use crate::trees::tree_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_BLOWUP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "resist-curve", version, about = "Resistance curvature on weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Node and link curvature of a graph.
    Compute(ComputeArgs),
    /// Forman / resistance / Ollivier comparison per link.
    Compare(CompareArgs),
    /// Integrate the resistance Ricci flow.
    Flow(FlowArgs),
    /// Monte Carlo boundary profile of Euclidean random graphs on a disc.
    Erg(ErgArgs),
    /// Mean link curvature of Erdős–Rényi graphs over a density grid.
    ErSweep(SweepArgs),
    /// Spanning-tree link inclusion against relative resistance.
    SampleTrees(TreeArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    pub graph: PathBuf,
    /// Use sketched resistances with this relative accuracy.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub graph: PathBuf,
    /// Slack allowed in the ordering checks.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub t_end: f64,
    /// Degree-normalized flow.
    #[arg(long)]
    pub normalized: bool,
    /// Contract nodes whose resistance collapses instead of halting.
    #[arg(long)]
    pub merge: bool,
    /// Stop once the matrix leaves the Laplacian cone.
    #[arg(long)]
    pub halt_outside_cone: bool,
    /// Times at which full matrices are written (repeatable).
    #[arg(long = "snapshot")]
    pub snapshots: Vec<f64>,
    #[arg(long)]
    pub max_step: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct ErgArgs {
    /// Disc radius `R`.
    #[arg(long, default_value_t = 4.0)]
    pub disc_radius: f64,
    /// Connection radius `r`.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Expected node count `N`.
    #[arg(long, default_value_t = 800.0)]
    pub nodes: f64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    /// Explicit densities (comma separated); overrides the log grid.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<f64>,
    #[arg(long, default_value_t = 1e-4)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 40)]
    pub rho_count: usize,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write into this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command-line arguments after the program name, without `--out`.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// SHA-256 of every input file, keyed by the path as given.
    pub input_hashes: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

fn strip_out(args: &[String]) -> Vec<String> {
    let mut kept = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        kept.push(a.clone());
    }
    kept
}

struct Outcome {
    code: i32,
    outputs: Vec<String>,
}

struct Writer {
    dir: PathBuf,
    written: Vec<String>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn put(&mut self, name: &str, body: &str) -> Result<()> {
        std::fs::write(self.dir.join(name), body)?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn done(self, code: i32) -> Outcome {
        Outcome { code, outputs: self.written }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes") + "\n"
}

/// Exit code for an error: bad input versus numerical trouble.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Io(_)
        | Error::SelfLoop { .. }
        | Error::NonpositiveWeight { .. }
        | Error::DuplicateLink { .. }
        | Error::IndexOutOfRange { .. }
        | Error::LinkNotFound { .. }
        | Error::InvalidSize { .. }
        | Error::OutOfRange { .. }
        | Error::MissingGeometry
        | Error::InvalidFaceDegree { .. }
        | Error::Disconnected { .. } => EXIT_INPUT,
        Error::BlowUpDetected { .. } => EXIT_BLOWUP,
        _ => EXIT_NUMERICAL,
    }
}

fn compute(a: &ComputeArgs) -> Result<Outcome> {
    let g = read_graph(&a.graph)?.graph;
    let profile = match a.epsilon {
        Some(eps) => approx_effective_resistance(&g, &ApproxConfig::new(eps, a.seed))?,
        None => effective_resistance(&g)?,
    };
    let report = CurvatureReport::new(&g, &profile);
    let mut w = Writer::new(&a.out.out)?;
    match a.format {
        Format::Csv => {
            w.put("nodes.csv", &export::node_curvature_csv(&report))?;
            w.put("links.csv", &export::link_curvature_csv(&report))?;
            w.put("profile.csv", &export::profile_csv(&profile))?;
        }
        Format::Json => w.put("curvature.json", &to_json(&report))?,
    }
    Ok(w.done(EXIT_OK))
}

fn compare(a: &CompareArgs) -> Result<Outcome> {
    let g = read_graph(&a.graph)?.graph;
    let profile = effective_resistance(&g)?;
    let rows = compare_links(&g, &profile, &OllivierSchedule::default(), a.tolerance)?;
    let mut w = Writer::new(&a.out.out)?;
    w.put("compare.csv", &export::compare_csv(&rows))?;
    let ok = rows.iter().all(|r| r.sandwich_ok);
    Ok(w.done(if ok { EXIT_OK } else { EXIT_NUMERICAL }))
}

#[derive(Serialize)]
struct FlowSummary {
    halt: Halt,
    halt_reason: &'static str,
    last_t: f64,
    steps: usize,
    merges: usize,
    potential_increase: Option<f64>,
}

fn flow(a: &FlowArgs) -> Result<Outcome> {
    let g = read_graph(&a.graph)?.graph;
    let beta = g.components().beta;
    if beta != 1 {
        return Err(Error::Disconnected { beta });
    }
    let ctl = StepControl {
        rtol: a.rtol,
        max_step: a.max_step,
        merge: if a.merge { MergePolicy::Merge } else { MergePolicy::Halt },
        halt_outside_cone: a.halt_outside_cone,
        snapshot_times: a.snapshots.clone(),
        ..StepControl::default()
    };
    let kind = if a.normalized { FlowKind::Normalized } else { FlowKind::Standard };
    let traj = integrate(&g.laplacian().0, a.t_end, &ctl, kind)?;
    let mut w = Writer::new(&a.out.out)?;
    w.put("trajectory.csv", &export::trajectory_csv(&traj))?;
    w.put("snapshots.json", &(export::snapshots_json(&traj) + "\n"))?;
    let last_t = traj.last().t;
    w.put(
        "halt.json",
        &to_json(&FlowSummary {
            halt: traj.halt,
            halt_reason: traj.halt.name(),
            last_t,
            steps: traj.samples.len() - 1,
            merges: traj.merges.len(),
            potential_increase: traj.potential_increase(),
        }),
    )?;
    let first_snap = a.snapshots.iter().copied().filter(|&s| s > 0.0).fold(f64::INFINITY, f64::min);
    let singular = matches!(traj.halt, Halt::BlowUpDetected { .. } | Halt::MergeThreshold { .. });
    let code = if singular && last_t < first_snap { EXIT_BLOWUP } else { EXIT_OK };
    Ok(w.done(code))
}

#[derive(Serialize)]
struct ErgSummary {
    samples: usize,
    skipped: Vec<usize>,
    total_nodes: usize,
    bulk_mean: f64,
    bulk_std_err: f64,
    bulk_count: usize,
    sup_model_gap: f64,
}

fn erg(a: &ErgArgs) -> Result<Outcome> {
    let cfg = ErgConfig::new(a.disc_radius, a.radius, a.nodes, a.seed);
    let bins = monte_carlo_profile(&cfg, a.samples, a.bins)?;
    let mut w = Writer::new(&a.out.out)?;
    w.put("profile.csv", &export::erg_profile_csv(&bins))?;
    w.put(
        "summary.json",
        &to_json(&ErgSummary {
            samples: bins.samples,
            skipped: bins.skipped.clone(),
            total_nodes: bins.total_nodes,
            bulk_mean: bins.bulk_mean,
            bulk_std_err: bins.bulk_std_err,
            bulk_count: bins.bulk_count,
            sup_model_gap: bins.sup_model_gap(),
        }),
    )?;
    for s in &bins.skipped {
        eprintln!("sample {s} skipped: resistance solve failed");
    }
    let code = if bins.skipped.len() * 10 > bins.samples { EXIT_NUMERICAL } else { EXIT_OK };
    Ok(w.done(code))
}

#[derive(Serialize)]
struct SweepSummary {
    n: usize,
    samples: usize,
    zero_crossing: Option<f64>,
}

fn sweep(a: &SweepArgs) -> Result<Outcome> {
    let rho = if a.rho.is_empty() { log_grid(a.rho_min, a.rho_max, a.rho_count) } else { a.rho.clone() };
    let cfg = SweepConfig { n: a.n, rho, samples: a.samples, seed: a.seed };
    let rows = er_sweep(&cfg)?;
    let mut w = Writer::new(&a.out.out)?;
    w.put("sweep.csv", &export::sweep_csv(&rows))?;
    w.put("histogram.csv", &export::sweep_histogram_csv(&rows))?;
    w.put("summary.json", &to_json(&SweepSummary { n: a.n, samples: a.samples, zero_crossing: zero_crossing(&rows) }))?;
    Ok(w.done(EXIT_OK))
}

fn sample_trees(a: &TreeArgs) -> Result<Outcome> {
    let g = read_graph(&a.graph)?.graph;
    let profile = effective_resistance(&g)?;
    let report = tree_report(&g, &profile, a.samples, a.seed)?;
    let mut w = Writer::new(&a.out.out)?;
    w.put("trees.json", &to_json(&report))?;
    w.put("tree_links.csv", &export::tree_links_csv(&report))?;
    w.put("tree_nodes.csv", &export::tree_nodes_csv(&report))?;
    Ok(w.done(if report.all_pass() { EXIT_OK } else { EXIT_NUMERICAL }))
}

fn inputs(cmd: &Command) -> Vec<&Path> {
    match cmd {
        Command::Compute(a) => vec![&a.graph],
        Command::Compare(a) => vec![&a.graph],
        Command::Flow(a) => vec![&a.graph],
        Command::SampleTrees(a) => vec![&a.graph],
        Command::Erg(_) | Command::ErSweep(_) | Command::Replay(_) => vec![],
    }
}

fn describe(cmd: &Command) -> (&'static str, Option<u64>, &Path) {
    match cmd {
        Command::Compute(a) => ("compute", a.epsilon.map(|_| a.seed), &a.out.out),
        Command::Compare(a) => ("compare", None, &a.out.out),
        Command::Flow(a) => ("flow", None, &a.out.out),
        Command::Erg(a) => ("erg", Some(a.seed), &a.out.out),
        Command::ErSweep(a) => ("er-sweep", Some(a.seed), &a.out.out),
        Command::SampleTrees(a) => ("sample-trees", Some(a.seed), &a.out.out),
        Command::Replay(_) => unreachable!("replay is dispatched separately"),
    }
}

fn execute(cmd: &Command, args: &[String]) -> Result<i32> {
    let outcome = match cmd {
        Command::Compute(a) => compute(a)?,
        Command::Compare(a) => compare(a)?,
        Command::Flow(a) => flow(a)?,
        Command::Erg(a) => erg(a)?,
        Command::ErSweep(a) => sweep(a)?,
        Command::SampleTrees(a) => sample_trees(a)?,
        Command::Replay(r) => return replay(r),
    };
    let (name, seed, out) = describe(cmd);
    let mut input_hashes = BTreeMap::new();
    for p in inputs(cmd) {
        input_hashes.insert(p.display().to_string(), sha256_file(p)?);
    }
    let manifest = RunManifest {
        command: name.to_string(),
        args: strip_out(args),
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_hashes,
        outputs: outcome.outputs,
    };
    std::fs::write(out.join("manifest.json"), to_json(&manifest))?;
    Ok(outcome.code)
}

fn replay(r: &ReplayArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&r.manifest)?;
    let m: RunManifest =
        serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    for (path, hash) in &m.input_hashes {
        let now = sha256_file(Path::new(path))?;
        if &now != hash {
            return Err(Error::Parse { line: 0, message: format!("input {path} changed since the manifest was written") });
        }
    }
    let out = r
        .out
        .clone()
        .unwrap_or_else(|| r.manifest.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")));
    let mut argv = vec!["resist-curve".to_string()];
    argv.extend(m.args.iter().cloned());
    argv.push("--out".into());
    argv.push(out.display().to_string());
    let cli = Cli::try_parse_from(&argv)
        .map_err(|e| Error::Parse { line: 0, message: format!("manifest arguments rejected: {e}") })?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Error::Parse { line: 0, message: "a manifest cannot replay another manifest".into() });
    }
    execute(&cli.command, &argv[1..])
}

fn configure_threads() {
    if let Some(n) = std::env::var("RESIST_CURVE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    configure_threads();
    match execute(&cli.command, &argv[1..]) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
