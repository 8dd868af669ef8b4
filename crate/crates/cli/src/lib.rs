//! Command-line front end: argument parsing and dispatch.

// `!(x > 0.0)` guards are written that way so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod commands;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use qutrit_geom::evolution::DEFAULT_STEP;
use qutrit_geom::phases::{TriangleParams, DEFAULT_SAMPLES_PER_ARC};

use crate::error::{CliError, CliResult};
use crate::output::open_output;

#[derive(Debug, Parser)]
#[command(name = "qutrit-geom", version, about = "Qutrit state geometry and geometric phases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometric phase of a canonical triangle by every available route.
    PhaseTriangle {
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(long, allow_hyphen_values = true)]
        chi2: f64,
        /// Samples per geodesic arc for the line integral.
        #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_ARC)]
        samples: usize,
        /// RK4 step for the evolution route.
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// Seed for the chart-frame search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest accepted discrepancy between routes.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bargmann phase of a closed polygon given as a JSON array of states.
    PhaseBargmann {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the geodesic between two states as CSV of n-vectors.
    Geodesic {
        #[arg(long)]
        state1: PathBuf,
        #[arg(long)]
        state2: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve around a triangle's geodesic polygon and report its phases.
    Evolve {
        #[arg(long)]
        triangle: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STEP, allow_hyphen_values = true)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded randomized sweep of every invariant.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Multiplier applied to every property tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a parsed command. `Ok(false)` means the command completed but a
/// tolerance check failed.
pub fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::PhaseTriangle {
            xi,
            eta,
            zeta,
            chi2,
            samples,
            step,
            seed,
            tol,
            out,
        } => {
            if samples < 2 {
                return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
            }
            if !(step > 0.0 && step.is_finite()) {
                return Err(CliError::Usage(format!("--step must be positive and finite, got {step}")));
            }
            if !(tol >= 0.0) {
                return Err(CliError::Usage(format!("--tol must be non-negative, got {tol}")));
            }
            let t = TriangleParams::new(xi, eta, zeta, chi2)?;
            let mut w = open_output(out.as_deref())?;
            let opts = commands::PhaseTriangleOptions {
                samples_per_arc: samples,
                step,
                tol,
                seed,
            };
            let pass = commands::phase_triangle(&t, &opts, &mut w)?;
            w.flush()?;
            Ok(pass)
        }
        Command::PhaseBargmann { input, out } => {
            let mut w = open_output(out.as_deref())?;
            commands::phase_bargmann(&input, &mut w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Geodesic {
            state1,
            state2,
            samples,
            out,
        } => {
            let mut w = open_output(out.as_deref())?;
            commands::geodesic(&state1, &state2, samples, &mut w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Evolve { triangle, step, out } => {
            let mut w = open_output(out.as_deref())?;
            commands::evolve(&triangle, step, &mut w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Check { seed, trials, tol, out } => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Usage(format!("--tol must be positive and finite, got {tol}")));
            }
            let report = check::run_check(seed, trials, tol);
            let mut w = open_output(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &report).map_err(|e| CliError::Failed(e.to_string()))?;
            writeln!(w)?;
            w.flush()?;
            Ok(report.pass)
        }
    }
}
