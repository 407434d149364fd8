//! `rlml`: validate, train, compare, persist and generate RLML models.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    ValidationFailed = 1,
    ParseFailed = 2,
    UsageError = 3,
    IoError = 4,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rlml",
    version,
    about = "Tabular reinforcement learning from RLML models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a model, printing every diagnostic.
    Validate(ModelArgs),
    /// Train the agent of a single-agent model and print its result.
    Run(RunArgs),
    /// Train every agent of a comparator model on the shared environment.
    Compare(CompareArgs),
    /// Generate a standalone program from a model.
    Gen(GenArgs),
    /// Follow the greedy policy of a saved model from a start state.
    Rollout(RolloutArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Path to the `.rlml` model.
    model: PathBuf,
    /// Replace the model's environment with one read from this file.
    #[arg(long, value_name = "FILE")]
    env: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// A fixed seed, or `random` for one drawn from the clock.
#[derive(Debug, Clone, Copy)]
enum SeedArg {
    Fixed(u64),
    Random,
}

fn parse_seed(s: &str) -> Result<SeedArg, String> {
    if s == "random" {
        return Ok(SeedArg::Random);
    }
    s.parse()
        .map(SeedArg::Fixed)
        .map_err(|_| format!("expected an unsigned integer or `random`, got `{s}`"))
}

#[derive(Debug, Args)]
struct SeedOpt {
    /// Seed for the random stream: an unsigned integer or `random`.
    #[arg(long, default_value = "0", value_parser = parse_seed)]
    seed: SeedArg,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedOpt,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the trained model to this file.
    #[arg(long, value_name = "FILE")]
    save: Option<PathBuf>,
    /// Continue training from a saved model.
    #[arg(long, value_name = "FILE")]
    resume: Option<PathBuf>,
    /// Write one discounted return per episode as CSV.
    #[arg(long, value_name = "FILE")]
    returns_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedOpt,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// `python_flavor` or `jvm_flavor`.
    #[arg(long)]
    target: String,
    /// Directory the program is written to.
    #[arg(short = 'o', long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct RolloutArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Saved model produced by `rlml run --save`.
    #[arg(long = "model", value_name = "FILE")]
    saved: PathBuf,
    /// Name of a non-terminal start state.
    #[arg(long)]
    start: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Exit::Ok
                }
                _ => Exit::UsageError,
            }
            .into();
        }
    };
    let status = match cli.command {
        Command::Validate(a) => commands::validate(&a),
        Command::Run(a) => commands::run(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Gen(a) => commands::gen(&a),
        Command::Rollout(a) => commands::rollout(&a),
    };
    match status {
        Ok(()) => Exit::Ok.into(),
        Err(exit) => exit.into(),
    }
}
