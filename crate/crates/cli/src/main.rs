mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use segpipe_core::EqualizeMode;

#[derive(Parser)]
#[command(
    name = "segpipe",
    version,
    about = "Segment grayscale images: histogram equalization, median filter, fuzzy c-means"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: equalize, median filter, fuzzy c-means
    Run(commands::RunArgs),
    /// Histogram-equalize an image
    Equalize(commands::EqualizeArgs),
    /// Median-filter an image
    Median(commands::MedianArgs),
    /// Cluster raw gray levels with fuzzy c-means
    Fcm(commands::FcmArgs),
    /// Generate a synthetic test image
    Gen(commands::GenArgs),
}

#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    /// Directory receiving the PGM outputs and report.json
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Write ASCII P2 files instead of binary P5
    #[arg(long)]
    pub ascii: bool,
}

#[derive(Args, Clone, Debug)]
pub struct FcmFlags {
    /// Number of clusters
    #[arg(long, default_value_t = 2)]
    pub clusters: usize,
    /// Fuzzifier m (> 1)
    #[arg(long, default_value_t = 2.0)]
    pub fuzzifier: f64,
    /// Convergence threshold on the largest membership change
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = 300)]
    pub max_iters: usize,
    /// Seed for the random initial memberships
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeMode {
    /// Darkest level to 0, brightest to max level
    Prose,
    /// Rescale into the occupied input range
    Minmax,
}

impl From<HeMode> for EqualizeMode {
    fn from(m: HeMode) -> Self {
        match m {
            HeMode::Prose => EqualizeMode::Stretch,
            HeMode::Minmax => EqualizeMode::MinMax,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => commands::run(args),
        Command::Equalize(args) => commands::equalize(args),
        Command::Median(args) => commands::median(args),
        Command::Fcm(args) => commands::fcm(args),
        Command::Gen(args) => commands::gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("segpipe: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
