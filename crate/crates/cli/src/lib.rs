//! Command-line front end for `gcore`: circuit files, density evaluation,
//! ladder-event compilation, oracle cross-checks and benchmarks.

pub mod commands;
pub mod complex;
pub mod decompose;
pub mod error;
pub mod file;
pub mod format;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{BenchOptions, OutputOptions, Outcomes};
pub use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gcore", version, about = "Heterodyne output densities of Gaussian circuits with core-state inputs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Circuit file (JSON).
    pub circuit: PathBuf,
    /// Outcome as comma-separated literals `a+bi`, one per measured mode.
    #[arg(allow_hyphen_values = true, required_unless_present = "outcomes_file", conflicts_with = "outcomes_file")]
    pub outcome: Option<String>,
    /// File with one outcome per line (`#` comments allowed).
    #[arg(long)]
    pub outcomes_file: Option<PathBuf>,
    /// Print `{density, kappa, n_terms, wall_time_ms}` per outcome.
    #[arg(long)]
    pub json: bool,
    /// Significant digits of the printed density.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=17))]
    pub digits: u16,
}

impl EvalArgs {
    fn outcomes(&self) -> Outcomes {
        match (&self.outcome, &self.outcomes_file) {
            (_, Some(path)) => Outcomes::File(path.clone()),
            (Some(text), None) => Outcomes::Single(text.clone()),
            (None, None) => unreachable!("clap requires an outcome"),
        }
    }

    fn output(&self) -> OutputOptions {
        OutputOptions { json: self.json, digits: self.digits as usize }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density of the measured modes (all modes unless the file says otherwise).
    Eval(EvalArgs),
    /// Marginal density of a subset of modes.
    Marginal {
        /// Measured modes, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        modes: Vec<usize>,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Rewrite ladder events into a core state and a Gaussian unitary.
    Compile {
        circuit: PathBuf,
        /// Write the compiled circuit as a circuit file.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=17))]
        digits: u16,
    },
    /// Modes, gate counts, degree and support.
    Info { circuit: PathBuf },
    /// Compare full densities with the truncated-Fock oracle.
    Check {
        circuit: PathBuf,
        /// Maximum occupation per mode.
        #[arg(long, default_value_t = gcore::oracle::DEFAULT_CUTOFF)]
        cutoff: usize,
        /// Largest accepted absolute deviation.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Single outcome over all modes; a fixed set of points otherwise.
        #[arg(long, allow_hyphen_values = true)]
        outcome: Option<String>,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=17))]
        digits: u16,
    },
    /// Time density evaluation across core-state degrees.
    Bench {
        /// Degree range `a..b` (inclusive) or a single degree.
        #[arg(long, default_value = "10..14", value_parser = parse_range)]
        range: std::ops::RangeInclusive<u32>,
        #[arg(long, default_value_t = 4)]
        modes: usize,
        /// Support size of the random core state.
        #[arg(long, default_value_t = 1)]
        support: usize,
        /// Repetitions per degree; the median is reported.
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u32>, String> {
    let bad = || format!("expected 'a..b' or 'n', found '{s}'");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.trim_start_matches('=').parse().map_err(|_| bad())?),
        None => {
            let n = s.parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(format!("empty range '{s}'"));
    }
    Ok(a..=b)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(args) => commands::evaluate(&args.circuit, None, &args.outcomes(), args.output(), out),
        Command::Marginal { modes, eval } => {
            commands::evaluate(&eval.circuit, Some(&modes), &eval.outcomes(), eval.output(), out)
        }
        Command::Compile { circuit, emit, digits } => commands::compile_cmd(&circuit, emit.as_deref(), digits as usize, out),
        Command::Info { circuit } => commands::info(&circuit, out),
        Command::Check { circuit, cutoff, tol, outcome, digits } => {
            commands::check(&circuit, cutoff, tol, outcome.as_deref(), digits as usize, out)
        }
        Command::Bench { range, modes, support, reps, seed, json } => {
            commands::bench(&BenchOptions { degrees: range, modes, support, reps, seed, json }, out)
        }
    }
}
