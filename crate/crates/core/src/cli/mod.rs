//! The `argverdict` command line.

mod commands;
pub mod config;

use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{RunConfig, ScorerMode, ThresholdConfig};

#[derive(Debug, Parser)]
#[command(name = "argverdict", version, about = "Ternary claim verification with argumentation frameworks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Seed for every random choice (sampling, initialisation, bootstrap).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory of cached model completions.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Directory of recorded responses (chat.jsonl, embeddings.jsonl) used
    /// instead of live endpoints.
    #[arg(long, global = true, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,

    /// Maximum concurrent claims or requests.
    #[arg(long, global = true)]
    pub parallelism: Option<usize>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Args)]
pub struct ScorerArgs {
    /// Base-score source for generated arguments.
    #[arg(long, value_name = "MODE")]
    pub scorer: Option<ScorerMode>,

    /// Head checkpoint for the trained-bsm scorer.
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,

    /// Replace the fixed 1/3 and 2/3 verdict thresholds with the values from
    /// --lower/--upper or the config file.
    #[arg(long)]
    pub override_thresholds: bool,

    /// Strengths at or below this are False (needs --override-thresholds).
    #[arg(long, requires = "override_thresholds")]
    pub lower: Option<f64>,

    /// Strengths at or above this are True (needs --override-thresholds).
    #[arg(long, requires = "override_thresholds")]
    pub upper: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify one claim or a JSONL file of claims.
    Verify(VerifyArgs),
    /// Train the base score model head.
    TrainBsm(TrainArgs),
    /// Run the pipeline on labelled claims and report metrics with BCa
    /// intervals.
    Evaluate(EvaluateArgs),
    /// Measure scorer inconsistency and ranking agreement.
    Diagnose(DiagnoseArgs),
    /// Serve the reward functions over HTTP.
    RewardServe(ServeArgs),
    /// Inspect or clear the completion cache.
    Cache(CacheArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Claim text.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub claim: Option<String>,

    /// JSONL file with one {"claim", "label"?, "id"?} per line.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,

    /// Run directory for records, frameworks and reports.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    #[command(flatten)]
    pub scorer: ScorerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Phase {
    Prime,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetSource {
    /// Targets come from the `target` field of each priming line.
    File,
    /// Targets come from the scoring model's prompted base scores.
    Llm,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    pub phase: Phase,

    /// Where to write the trained checkpoint. The loss trace goes next to it
    /// with a `.loss.csv` suffix.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    /// Starting checkpoint (the primed head for --phase full).
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,

    /// Start phase two from a freshly initialised head.
    #[arg(long, conflicts_with = "checkpoint")]
    pub from_scratch: bool,

    /// Continue an interrupted phase-two run from its partial checkpoint.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["checkpoint", "from_scratch"])]
    pub resume: Option<PathBuf>,

    /// Priming examples {"claim","argument","relation","target"?}.
    #[arg(long, value_name = "FILE")]
    pub priming: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "file")]
    pub targets: TargetSource,

    /// Labelled debates {"claim","label","supports","attacks"}.
    #[arg(long, value_name = "FILE")]
    pub debates: Option<PathBuf>,

    /// Ranked sets {"claim","relation","members"}.
    #[arg(long, value_name = "FILE")]
    pub ranked: Option<PathBuf>,

    /// Paraphrase groups {"claim","relation","members"}.
    #[arg(long, value_name = "FILE")]
    pub paraphrases: Option<PathBuf>,

    #[arg(long)]
    pub learning_rate: Option<f64>,

    #[arg(long)]
    pub lambda_rank: Option<f64>,

    #[arg(long)]
    pub lambda_con: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Labelled claims to run through the pipeline.
    #[arg(long, value_name = "FILE", required_unless_present = "records")]
    pub input: Option<PathBuf>,

    /// Score an existing records.jsonl instead of running the pipeline.
    #[arg(long, value_name = "FILE", conflicts_with = "input")]
    pub records: Option<PathBuf>,

    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    #[arg(long, default_value_t = 10_000)]
    pub resamples: usize,

    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    #[command(flatten)]
    pub scorer: ScorerArgs,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long, value_name = "FILE", required_unless_present = "ranked")]
    pub paraphrases: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    pub ranked: Option<PathBuf>,

    /// Where to write the diagnostics JSON.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    #[command(flatten)]
    pub scorer: ScorerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdvantageArg {
    Normalized,
    MeanOnly,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "ARGVERDICT_BIND", default_value = "127.0.0.1")]
    pub bind: IpAddr,

    #[arg(long, env = "ARGVERDICT_PORT", default_value_t = 8080)]
    pub port: u16,

    /// Plateau width for items that do not carry their own.
    #[arg(long)]
    pub delta: Option<f64>,

    #[arg(long, value_enum, default_value = "normalized")]
    pub advantages: AdvantageArg,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    #[command(subcommand)]
    pub action: CacheAction,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Print the number of entries and their total size.
    Inspect,
    /// Delete every entry.
    Clear,
}

fn init_logging(verbose: u8) {
    let default = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let filter = tracing_subscriber::EnvFilter::try_from_env("ARGVERDICT_LOG")
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(default));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .try_init();
}

/// Parses the process arguments and runs the selected command.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.global.verbose);
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
