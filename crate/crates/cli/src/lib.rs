//! Command-line front end: `simulate`, `sweep`, `measure` and `pipeline`.
//!
//! Every output starts with a provenance record (tool version, the full
//! resolved configuration and the seed where one applies). CSV outputs carry
//! it as leading `# ` comment lines, JSON outputs as a `provenance` field.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use structuration::corpus::{self, CorpusError};
use structuration::dynamics::{self, DynamicsError, MapFamily, MapKind, RootPolicy, SimConfig, SweepConfig};
use structuration::infotheory::{ContingencyTable, EntropyReport, InfoError, IpfConfig};
use structuration::linalg::Basis;
use structuration::pipeline::{self, BinningPolicy, PipelineConfig, PipelineError};
use thiserror::Error;

const TOOL: &str = "structuration";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = TOOL, version, about = "Incursive map simulation and three-way entropy measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate one map and write its trajectory as `t,x,event` CSV.
    Simulate(SimulateArgs),
    /// Run seeded ensembles over a parameter grid and write `param,run,termination_step` CSV.
    Sweep(SweepArgs),
    /// Entropy statistics of an `x,y,z,count` contingency table, as JSON.
    Measure(MeasureArgs),
    /// The corpus pipeline (matrices, rotated components, binning, entropies), as JSON.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Random,
    Plus,
    Minus,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// logistic, incursive, double-contingency, interaction, self-organization or organization.
    #[arg(long)]
    map: MapFamily,
    /// Parameter of the logistic, incursive and double-contingency maps.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Parameter of the interaction map.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Parameter of the self-organization map.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Parameter of the organization map.
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
}

#[derive(Debug, Args)]
struct PolicyArgs {
    /// Root choice at two-valued steps.
    #[arg(long, value_enum, default_value = "random")]
    policy: PolicyArg,
    /// Probability of the plus root under `--policy random`.
    #[arg(long, default_value_t = 0.5)]
    p_plus: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Initial state; defaults to 1 for the interaction map and 0.5 otherwise.
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    map: MapFamily,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    /// Run `r` uses seed `seed + r` (wrapping) at every grid point.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
    /// Initial state; defaults to 1 for the interaction map and 0.5 otherwise.
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Per-run CSV output, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Optional JSON file with the per-parameter survival statistics.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// CSV with header `x,y,z,count`.
    #[arg(long)]
    table: PathBuf,
    /// IPF tolerance on the bivariate marginals.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasisArg {
    Correlation,
    Covariance,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// CSV with header `id,title,authors,year`, authors separated by `;`.
    #[arg(long)]
    corpus: PathBuf,
    /// Keep words occurring more than this many times.
    #[arg(long, default_value_t = 2)]
    word_threshold: u64,
    /// Keep authors occurring more than this many times.
    #[arg(long, default_value_t = 1)]
    author_threshold: u64,
    /// Half-width of the central bin for rotated loadings.
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, value_enum, default_value = "correlation")]
    basis: BasisArg,
    /// Comma-separated stopword list replacing the built-in one.
    #[arg(long, value_delimiter = ',')]
    stopwords: Option<Vec<String>>,
    #[arg(long, default_value_t = 1e-10)]
    ipf_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    ipf_max_iter: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Dynamics(_) => "dynamics",
            CliError::Info(_) => "infotheory",
            CliError::Corpus(_) => "corpus",
            CliError::Pipeline(_) => "pipeline",
            CliError::Io { .. } => "io",
            CliError::Output(_) => "output",
        }
    }
}

#[derive(Serialize)]
struct Provenance<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: C,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl<'a, C: Serialize> Provenance<'a, C> {
    fn new(command: &'a str, config: C, seed: Option<u64>) -> Self {
        Provenance { tool: TOOL, version: VERSION, command, config, seed }
    }

    fn csv_header(&self) -> String {
        let config = serde_json::to_string(&self.config).expect("config serializes");
        let mut header = format!("# {TOOL} {VERSION} {}\n# config: {config}\n", self.command);
        if let Some(seed) = self.seed {
            header.push_str(&format!("# seed: {seed}\n"));
        }
        header
    }
}

#[derive(Serialize)]
struct SweepSummary<'a, C: Serialize> {
    provenance: &'a Provenance<'a, C>,
    stats: &'a [dynamics::SurvivalStats],
}

#[derive(Serialize)]
struct MeasureConfig {
    table: String,
    ipf: IpfConfig,
}

#[derive(Serialize)]
struct MeasureOutput<'a> {
    provenance: Provenance<'a, MeasureConfig>,
    labels: &'a [Vec<String>; 3],
    total_count: u64,
    report: EntropyReport,
}

#[derive(Serialize)]
struct PipelineRunConfig<'a> {
    corpus: String,
    pipeline: &'a PipelineConfig,
}

#[derive(Serialize)]
struct PipelineOutput<'a> {
    provenance: Provenance<'a, PipelineRunConfig<'a>>,
    report: &'a pipeline::StructurationReport,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code: 0 on success, 1 on domain errors (with a
/// JSON error object on `stderr`), 2 on usage errors.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate(args, stdout),
        Command::Sweep(args) => sweep(args, stdout),
        Command::Measure(args) => measure(args, stdout),
        Command::Pipeline(args) => run_pipeline(args, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            2
        }
        Err(e) => {
            let body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            let _ = writeln!(stderr, "{body}");
            1
        }
    }
}

fn map_kind(args: &MapArgs) -> Result<MapKind, CliError> {
    let given: Vec<(&str, f64)> = [("a", args.a), ("b", args.b), ("c", args.c), ("d", args.d)]
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name, v)))
        .collect();
    let symbol = args.map.parameter_symbol();
    match given.as_slice() {
        [(name, value)] if *name == symbol => Ok(MapKind::new(args.map, *value)?),
        [] => Err(CliError::Usage(format!("the {} map needs --{symbol}", args.map))),
        _ => Err(CliError::Usage(format!("the {} map takes exactly one parameter, --{symbol}", args.map))),
    }
}

fn root_policy(args: &PolicyArgs) -> Result<RootPolicy, CliError> {
    Ok(match args.policy {
        PolicyArg::Random => RootPolicy::random(args.p_plus)?,
        PolicyArg::Plus => RootPolicy::AlwaysPlus,
        PolicyArg::Minus => RootPolicy::AlwaysMinus,
    })
}

fn default_x0(family: MapFamily) -> f64 {
    match family {
        MapFamily::Interaction => 1.0,
        _ => 0.5,
    }
}

fn simulate(args: SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let map = map_kind(&args.map)?;
    let config = SimConfig::new(
        map,
        args.x0.unwrap_or_else(|| default_x0(map.family())),
        args.steps,
        args.seed,
        root_policy(&args.policy)?,
    )?;
    let traj = dynamics::simulate(&config)?;
    let mut buf = Provenance::new("simulate", config, Some(config.seed)).csv_header().into_bytes();
    dynamics::write_trajectory_csv(&traj, &mut buf).map_err(|e| CliError::Output(e.to_string()))?;
    emit(&args.out, &buf, stdout)
}

fn sweep(args: SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = SweepConfig {
        family: args.map,
        grid: args.grid,
        runs_per_point: args.runs,
        base_seed: args.seed,
        steps_cap: args.cap,
        x0: args.x0.unwrap_or_else(|| default_x0(args.map)),
        root_policy: root_policy(&args.policy)?,
    };
    let outcome = dynamics::sweep(&config)?;
    let provenance = Provenance::new("sweep", &config, Some(config.base_seed));
    let mut buf = provenance.csv_header().into_bytes();
    dynamics::write_sweep_csv(&outcome, &mut buf).map_err(|e| CliError::Output(e.to_string()))?;
    if let Some(path) = &args.summary {
        let summary = SweepSummary { provenance: &provenance, stats: &outcome.stats };
        emit(path, &to_json(&summary)?, stdout)?;
    }
    emit(&args.out, &buf, stdout)
}

fn measure(args: MeasureArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ipf = IpfConfig { tol: args.tol, max_iter: args.max_iter };
    let table = ContingencyTable::read_csv(open(&args.table)?)?;
    let report = EntropyReport::compute(&table.to_distribution(), ipf)?;
    let config = MeasureConfig { table: args.table.display().to_string(), ipf };
    let body = MeasureOutput {
        provenance: Provenance::new("measure", config, None),
        labels: table.labels(),
        total_count: table.total(),
        report,
    };
    emit(&args.out, &to_json(&body)?, stdout)
}

fn run_pipeline(args: PipelineArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = PipelineConfig {
        word_threshold: args.word_threshold,
        author_threshold: args.author_threshold,
        basis: match args.basis {
            BasisArg::Correlation => Basis::Correlation,
            BasisArg::Covariance => Basis::Covariance,
        },
        binning: BinningPolicy::sign_ternary(args.tau)?,
        ipf: IpfConfig { tol: args.ipf_tol, max_iter: args.ipf_max_iter },
        stopwords: args.stopwords,
        ..PipelineConfig::default()
    };
    let docs = corpus::read_corpus_csv(open(&args.corpus)?)?;
    let report = pipeline::measure(&docs, &config)?;
    let config = PipelineRunConfig { corpus: args.corpus.display().to_string(), pipeline: &config };
    let body = PipelineOutput { provenance: Provenance::new("pipeline", config, None), report: &report };
    emit(&args.out, &to_json(&body)?, stdout)
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn to_json(value: &impl Serialize) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn emit(out: &Path, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    if out == Path::new("-") {
        stdout.write_all(bytes).map_err(|e| CliError::Output(e.to_string()))
    } else {
        std::fs::write(out, bytes).map_err(|source| CliError::Io { path: out.display().to_string(), source })
    }
}
