//! `choquet`: capacities, Choquet integrals, preference learning and axiom
//! scans from the command line.

mod commands;
mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use choquet_core::Error;

/// Exit status for usage errors and unreadable input.
const EXIT_USAGE: u8 = 1;
/// Infeasible data or violations found.
const EXIT_FOUND: u8 = 2;
const EXIT_CONSISTENCY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "choquet", version, about = "Capacities, Choquet integrals and preference learning")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance for checks and grouping.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    /// One JSON record per line.
    Machine,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Choquet integral of profiles.
    Eval(commands::EvalArgs),
    /// Shapley values and pairwise interaction indices.
    Indices(commands::IndicesArgs),
    /// Validity and structure of a capacity; fit against data if given.
    Check(commands::CheckArgs),
    /// Lattice polynomial of a 0-1 capacity.
    Lattice(commands::LatticeArgs),
    /// Identify a capacity from preference data.
    Learn(commands::LearnArgs),
    /// Learn a capacity and value functions from categorical data.
    LearnJoint(commands::LearnJointArgs),
    /// Synthetic model and its preference data.
    Synth(commands::SynthArgs),
    /// Scan a model or relation for violations of an axiom.
    CheckAxiom(commands::CheckAxiomArgs),
    /// Interaction groups from Möbius support or from a relation scan.
    Groups(commands::GroupsArgs),
    /// Experiments on synthetic models.
    #[command(subcommand)]
    Experiment(commands::Experiment),
}

/// A failure with its exit status.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) => EXIT_FOUND,
            Error::Consistency(_) | Error::Unbounded(_) => EXIT_CONSISTENCY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Infeasibility or violations were reported.
    Found,
}

fn limit_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("CHOQUET_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::usage(format!("CHOQUET_THREADS: expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(format!("CHOQUET_THREADS: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = limit_threads().and_then(|()| commands::run(&cli));
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Found) => ExitCode::from(EXIT_FOUND),
        Err(f) => {
            eprintln!("choquet: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
