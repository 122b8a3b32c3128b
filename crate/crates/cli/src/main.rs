//! `wvexp`: weak-value tables, state reconstruction and Birkhoff polytope
//! tools on the command line.
//!
//! Exit codes: 0 success, 1 internal check failed, 2 overlap too small for a
//! weak value, 3 singular measurement, 4 bad input.

mod commands;
mod input;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use commands::{MatrixSource, SampleFilter};
use output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] wvexp_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("internal check failed: {0}")]
    Invariant(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use wvexp_core::Error as E;
        match self {
            CliError::Core(E::OverlapTooSmall { .. }) => 2,
            CliError::Core(E::SingularMeasurement { .. }) => 3,
            CliError::Core(E::SearchFailed { .. }) => 1,
            CliError::Core(_) | CliError::Input(_) => 4,
            CliError::Invariant(_) | CliError::Output(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wvexp", version, about = "Weak-value expansion, reconstruction and Birkhoff polytope tools")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weak values, overlap matrix and W operators of an operator in a basis pair.
    WeakTable {
        /// sigma_x|y|z, sigma_theta, L_x|y|z, L_theta, gellmann_1..8, identity, or file:<path>.
        operator: String,
        /// exclusive2, rotated2, rotated3, or file:<path>.
        basis: String,
        /// Angle in radians for rotated bases and operators (`pi/3` is accepted).
        #[arg(long, default_value = "0", value_parser = input::parse_angle, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Recover the prepared diagonal state from post-measurement probabilities.
    Reconstruct {
        /// Comma-separated probabilities; fractions like 3/4 are accepted.
        #[arg(long)]
        tau: String,
        #[arg(long, value_parser = input::parse_angle, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
    },
    /// Bistochastic matrices and the Birkhoff polytope.
    Birkhoff {
        #[command(subcommand)]
        command: BirkhoffCommand,
    },
}

#[derive(Debug, Subcommand)]
enum BirkhoffCommand {
    /// Bistochastic and unistochastic tests, determinant, irreversibility.
    Classify {
        /// Convex coefficients over the N! permutation corners.
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        coeffs: Option<String>,
        /// JSON file with a real square matrix, row-major.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Grid a patch of up to four 3x3 corners and flag degenerate points.
    Sample {
        #[arg(long, default_value = "0,1,2,3")]
        corners: String,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u16).range(2..=512))]
        resolution: u16,
        #[arg(long, value_enum, default_value = "all")]
        filter: SampleFilter,
    },
    /// Points of a corner triangle where the unistochastic condition is tight.
    Hypocycloid {
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u16).range(3..=512))]
        resolution: u16,
        #[arg(long, default_value = "0,3,4")]
        triangle: String,
    },
    /// Permutation corners and their pairwise distances.
    Corners {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

fn run(cli: &Cli) -> Result<Vec<u8>, CliError> {
    let doc = match &cli.command {
        Command::WeakTable { operator, basis, theta } => commands::weak_table(operator, basis, *theta)?,
        Command::Reconstruct { tau, theta, dim } => commands::reconstruct(&input::parse_list(tau)?, *theta, *dim as usize)?,
        Command::Birkhoff { command } => match command {
            BirkhoffCommand::Classify { coeffs, matrix } => {
                let source = match (coeffs, matrix) {
                    (Some(c), _) => MatrixSource::Coefficients(input::parse_list(c)?),
                    (None, Some(m)) => MatrixSource::File(m.clone()),
                    (None, None) => return Err(CliError::Input("give --coeffs or --matrix".into())),
                };
                commands::classify(&source)?
            }
            BirkhoffCommand::Sample { corners, resolution, filter } => {
                commands::sample(&input::parse_indices(corners)?, *resolution as usize, *filter)?
            }
            BirkhoffCommand::Hypocycloid { resolution, triangle } => {
                let t: [usize; 3] = input::parse_indices(triangle)?
                    .try_into()
                    .map_err(|_| CliError::Input("--triangle takes three corner indices".into()))?;
                commands::hypocycloid(t, *resolution as usize)?
            }
            BirkhoffCommand::Corners { n } => commands::corners(*n)?,
        },
    };
    doc.render(cli.format)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli).and_then(|bytes| match &cli.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(&bytes).map_err(|e| CliError::Output(e.to_string())),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
