//! `cascore`: community association scores, ensemble partitioning, outlier
//! ranking and cover refinement over plain edge-list graphs.

mod commands;
mod manifest;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use cascore::ecg::Scheme;
use cascore::scores::ScoreKind;
use clap::{Args, Parser, Subcommand};

use commands::Failure;

fn parse_score(s: &str) -> Result<ScoreKind, String> {
    s.parse().map_err(|_| format!("unknown score {s:?}, expected ief, nief or p"))
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|_| format!("unknown scheme {s:?}, expected ecg, or or and"))
}

#[derive(Parser)]
#[command(name = "cascore", version, about)]
struct Cli {
    /// Worker threads (default: all cores). CASCORE_THREADS overrides.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Output directory (gets a manifest.json alongside the artifacts)
    #[arg(short, long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Print the primary artifact to stdout instead of writing files
    #[arg(long)]
    pub stdout: bool,
}

#[derive(Args)]
pub struct ScoreArgs {
    pub graph: PathBuf,
    /// Partition or cover file defining the communities to score against
    pub communities: PathBuf,
    /// Score used for ranking with --top: ief, nief or p
    #[arg(long, value_parser = parse_score, default_value = "p")]
    pub score: ScoreKind,
    /// Only emit rows for this node label
    #[arg(long)]
    pub node: Option<String>,
    /// Keep the top N communities per node under --score
    #[arg(long)]
    pub top: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct PartitionArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct EcgArgs {
    pub graph: PathBuf,
    /// Ensemble size
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    /// Edge weighting scheme: ecg, or, and
    #[arg(long, value_parser = parse_scheme, default_value = "ecg")]
    pub scheme: Scheme,
    /// Association score used by the or/and schemes
    #[arg(long, value_parser = parse_score, default_value = "p")]
    pub score: ScoreKind,
    /// Minimum ensemble edge weight
    #[arg(long, default_value_t = 0.05)]
    pub floor: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the reweighted edge list
    #[arg(long)]
    pub weights: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct OutliersArgs {
    pub graph: PathBuf,
    /// Partition to score against; default runs the ensemble partitioner
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long, value_parser = parse_score, default_value = "p")]
    pub score: ScoreKind,
    /// True outlier node list; adds roc.csv and auc.json
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct RefineArgs {
    pub graph: PathBuf,
    /// Initial cover file (or use --init ego-split)
    pub cover: Option<PathBuf>,
    /// Built-in initializer; the only value is "ego-split"
    #[arg(long, value_parser = ["ego-split"])]
    pub init: Option<String>,
    /// Smallest persona cluster kept by the ego-split initializer
    #[arg(long, default_value_t = 5)]
    pub ego_min_size: usize,
    #[arg(long, value_parser = parse_score, default_value = "ief")]
    pub score: ScoreKind,
    /// Membership threshold for the refined cover
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    /// Comma-separated thresholds for the outlier-count table
    #[arg(long)]
    pub tau_grid: Option<String>,
    /// Drop refined communities smaller than this
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    /// True cover; prints onmi before/after refinement
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Number of nodes
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Degree power-law exponent
    #[arg(long, default_value_t = 2.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 5)]
    pub d_min: u64,
    #[arg(long, default_value_t = 50)]
    pub d_max: u64,
    /// Community size power-law exponent
    #[arg(long, default_value_t = 1.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 20)]
    pub s_min: u64,
    #[arg(long, default_value_t = 100)]
    pub s_max: u64,
    /// Fraction of each node's degree wired to the background
    #[arg(long, default_value_t = 0.2)]
    pub xi: f64,
    /// Number of planted outlier nodes
    #[arg(long, default_value_t = 0)]
    pub outliers: usize,
    /// Expected memberships per non-outlier node
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Predicted partition or cover
    pub pred: PathBuf,
    /// Ground-truth partition or cover
    pub truth: PathBuf,
    /// Graph the node labels refer to
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args)]
pub struct PlotArgs {
    /// Two-column csv with a header row
    pub input: PathBuf,
    /// line or bar (default: inferred from the header)
    #[arg(long, value_parser = ["line", "bar"])]
    pub kind: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Score nodes against a set of communities
    Score(ScoreArgs),
    /// Partition a graph by modularity optimization
    Partition(PartitionArgs),
    /// Ensemble partitioning with association-score edge reweighting
    Ecg(EcgArgs),
    /// Rank nodes by their best association score, lowest first
    Outliers(OutliersArgs),
    /// Threshold an overlapping cover by association score
    Refine(RefineArgs),
    /// Generate a synthetic benchmark graph with planted communities
    Generate(GenerateArgs),
    /// Compare a prediction against ground truth
    Eval(EvalArgs),
    /// Render a csv as a standalone SVG chart
    Plot(PlotArgs),
}

fn init_threads(flag: Option<usize>) {
    let n = std::env::var("CASCORE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .or(flag);
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Score(a) => commands::cmd_score(a),
        Command::Partition(a) => commands::cmd_partition(a),
        Command::Ecg(a) => commands::cmd_ecg(a),
        Command::Outliers(a) => commands::cmd_outliers(a),
        Command::Refine(a) => commands::cmd_refine(a),
        Command::Generate(a) => commands::cmd_generate(a),
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Plot(a) => commands::cmd_plot(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Degenerate(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
