//! `dynsis` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numeric or
//! resource failure (non-convergence, enumeration budget).

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Mode;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "dynsis", version, about = "SIS epidemics on switching networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Decide die-out from the joint spectral radius of the system set.
    Threshold(ConfigArgs),
    /// Mean-field trajectory or Monte Carlo runs as CSV.
    Simulate(ConfigArgs),
    /// Sweep beta over a range; one CSV row per value.
    Sweep(ConfigArgs),
    /// Compare expected column sums of random Gilbert products with Monte Carlo.
    VerifyAppendix(AppendixArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Regular,
    #[value(alias = "watts-strogatz")]
    Ws,
    #[value(alias = "barabasi-albert")]
    Ba,
    Gilbert,
    Star,
    Complete,
}

#[derive(Debug, Args)]
struct GenArgs {
    family: Family,
    #[arg(long)]
    n: usize,
    /// Degree (regular) or lattice neighbours (ws).
    #[arg(long)]
    k: Option<usize>,
    /// Link probability (gilbert).
    #[arg(long)]
    p: Option<f64>,
    /// Links per new node (ba).
    #[arg(long)]
    m: Option<usize>,
    /// Rewiring probability (ws).
    #[arg(long)]
    rewire: Option<f64>,
    /// Required for random families; gilbert falls back to 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Edge-list destination; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// Config file plus overrides. Flags take precedence over the file.
#[derive(Debug, Args)]
struct ConfigArgs {
    #[arg(long, short)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    init_fraction: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    allow_reinfection: bool,
    #[arg(long)]
    max_depth: Option<usize>,
    /// induced-1, induced-2 or induced-inf.
    #[arg(long)]
    norm: Option<String>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Debug, Args)]
struct AppendixArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 3)]
    k_max: u32,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Draw the adjacency symmetrically instead of entry by entry.
    #[arg(long)]
    symmetric: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Threshold(a) => commands::threshold(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::VerifyAppendix(a) => commands::verify_appendix(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
