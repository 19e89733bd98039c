//! Thin experiment CLI over the library harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gevlearn::harness::{self, EtaSpec, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "gevlearn",
    about = "Run online-learning, game, and prediction-market experiments with GEV choice models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single learner against a payoff stream.
    Learn(CommonArgs),
    /// Run repeated-game dynamics with per-player learners.
    Game(CommonArgs),
    /// Drive a cost-function market through a trade stream.
    Market(CommonArgs),
    /// Emit the per-model regret bound table.
    Bounds(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config document (JSON, see schemas/experiment.schema.json).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the learning parameter: a number or "optimal".
    #[arg(long)]
    eta: Option<String>,
    /// Artifact directory; defaults to $GEVLEARN_OUT_DIR, then ./out.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn expected_kind(command: &Command) -> &'static str {
    match command {
        Command::Learn(_) => "learn",
        Command::Game(_) => "game",
        Command::Market(_) => "market",
        Command::Bounds(_) => "bounds",
    }
}

fn config_kind(config: &ExperimentConfig) -> &'static str {
    match config {
        ExperimentConfig::Learn(_) => "learn",
        ExperimentConfig::Game(_) => "game",
        ExperimentConfig::Market(_) => "market",
        ExperimentConfig::Bounds(_) => "bounds",
    }
}

fn execute(command: &Command) -> gevlearn::Result<harness::RunOutcome> {
    let args = match command {
        Command::Learn(a) | Command::Game(a) | Command::Market(a) | Command::Bounds(a) => a,
    };
    let mut config = ExperimentConfig::from_path(&args.config)?;
    let expected = expected_kind(command);
    let actual = config_kind(&config);
    if expected != actual {
        return Err(gevlearn::Error::Config(format!(
            "subcommand `{expected}` given a `{actual}` config ({})",
            args.config.display()
        )));
    }
    if let Some(seed) = args.seed {
        config.override_seed(seed);
    }
    if let Some(raw) = &args.eta {
        config.override_eta(EtaSpec::parse_flag(raw)?);
    }
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("GEVLEARN_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let base_dir = args
        .config
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    harness::run(&config, &base_dir, &out_dir)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(outcome) => {
            for path in &outcome.artifacts {
                println!("wrote {}", path.display());
            }
            if outcome.ok() {
                ExitCode::SUCCESS
            } else {
                for failure in &outcome.failures {
                    eprintln!("audit failure: {failure}");
                }
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
