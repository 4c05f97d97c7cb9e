//! `gatedist`: distinguishability of unitary gates from the command line.
//!
//! Every command prints one JSON object `{"command", "inputs", "result"}`.
//! Exit status: 0 on success, 2 for invalid input, 3 when a numerical routine
//! fails to converge, 1 for internal consistency failures, 64 for usage errors.

mod commands;
mod matrix_file;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Core(gatedist::Error),
    Input(String),
}

impl From<gatedist::Error> for CliError {
    fn from(e: gatedist::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(gatedist::Error::Convergence(_)) => 3,
            CliError::Core(gatedist::Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gatedist", version, about = "Statistical distinguishability of unitary gates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte-Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    /// Unitarity tolerance for input matrices.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Oracle restarts.
    #[arg(long, global = true, default_value_t = 32)]
    pub budget: usize,
    /// Write an `x,y` CSV series to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct GatePair {
    #[arg(long, value_name = "FILE")]
    pub u1: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub u2: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gate fidelity of two gates.
    Fidelity(GatePair),
    /// Statistical distance of two gates.
    Distance(GatePair),
    /// Minimal number of parallel copies for perfect discrimination.
    Ncopies(GatePair),
    /// Optimal probe state.
    Probe(commands::ProbeArgs),
    /// Shortest arc holding the eigenphases of U1†U2, or of given phases.
    Arc(commands::ArcArgs),
    /// Brute-force minimum overlap.
    Oracle(commands::OracleArgs),
    /// Fidelity of two density matrices.
    StateFidelity(commands::StateArgs),
    /// Fidelity and statistical distance of two distributions.
    ClassicalDistance(commands::ClassicalArgs),
    /// Average fidelity over random pure states.
    AvgFidelity(GatePair),
    /// Haar samples of SU(2).
    HaarSample(commands::HaarArgs),
    /// Compare the SU(2) metric in matrix and coordinate form.
    MetricCheck(commands::MetricArgs),
    /// Member of the SU(3) family perfectly separable from the identity.
    Su3Example(commands::Su3Args),
    /// Simulate sequential elimination over a set of gates.
    Discriminate(commands::DiscriminateArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    let g = &cli.global;
    let result = match &cli.command {
        Command::Fidelity(a) => commands::fidelity(g, a),
        Command::Distance(a) => commands::distance(g, a),
        Command::Ncopies(a) => commands::ncopies(g, a),
        Command::Probe(a) => commands::probe(g, a),
        Command::Arc(a) => commands::arc(g, a),
        Command::Oracle(a) => commands::oracle(g, a),
        Command::StateFidelity(a) => commands::state_fidelity(g, a),
        Command::ClassicalDistance(a) => commands::classical_distance(g, a),
        Command::AvgFidelity(a) => commands::avg_fidelity(g, a),
        Command::HaarSample(a) => commands::haar_sample(g, a),
        Command::MetricCheck(a) => commands::metric_check(g, a),
        Command::Su3Example(a) => commands::su3_example(g, a),
        Command::Discriminate(a) => commands::discriminate(g, a),
    };
    match result {
        Ok(doc) => {
            println!("{}", output::to_json(&doc));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
