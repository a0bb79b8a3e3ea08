//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use lamopt_core::PlyWeighting;

use crate::commands::optimize::{self, OptimizeArgs};
use crate::commands::verify::{self, VerifyArgs};
use crate::commands::{emit, params, region};
use crate::error::{CliError, CliResult, ExitCode};

const DEFAULT_ANGLES: &str = "0,45,-45,90";

/// Lamination-parameter analysis and bi-level laminate sizing.
///
/// Units: moduli in MPa, lengths in mm, running loads in N/mm (compression
/// negative), angles in degrees.
#[derive(Debug, Parser)]
#[command(name = "lamopt", version)]
pub struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true, env = "LAMOPT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lamination parameters and stiffness matrices of a stack file.
    Params {
        stack: PathBuf,
    },
    /// Export the feasible region of bending parameters for fixed ply counts.
    Region {
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = DEFAULT_ANGLES)]
        angles: Vec<f64>,
        #[arg(long, default_value = "midpoint")]
        mode: PlyWeighting,
        /// JSON output file (default: stdout).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also write the vertices as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Hull facet tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Size a laminate and retrieve its stacking sequence.
    Optimize {
        problem: PathBuf,
        /// Result file (default: stdout).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Override the weighting mode of the problem file.
        #[arg(long)]
        mode: Option<PlyWeighting>,
        /// Include wall-clock timings (makes the output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Check the region against brute-force enumeration of all sequences.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = DEFAULT_ANGLES)]
        angles: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "midpoint")]
        mode: PlyWeighting,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn dispatch(command: &Command) -> CliResult<ExitCode> {
    match command {
        Command::Params { stack } => {
            emit(None, &params::run(stack)?)?;
            Ok(ExitCode::Success)
        }
        Command::Region { counts, angles, mode, out, csv, tol } => {
            let rep = region::report(counts, angles, *mode, *tol)?;
            emit(out.as_deref(), &region::to_json(&rep))?;
            if let Some(path) = csv {
                emit(Some(path), &region::to_csv(&rep))?;
            }
            Ok(ExitCode::Success)
        }
        Command::Optimize { problem, out, mode, timings } => {
            let (text, code) = optimize::run(&OptimizeArgs { problem, mode: *mode, timings: *timings })?;
            emit(out.as_deref(), &text)?;
            Ok(code)
        }
        Command::Verify { counts, angles, samples, seed, mode, tol } => {
            let args = VerifyArgs { counts, angles, samples: *samples, seed: *seed, mode: *mode, tol: *tol };
            let (text, code) = verify::run(&args)?;
            emit(None, &text)?;
            Ok(code)
        }
    }
}

/// Runs the parsed command on a pool of the requested size and returns the
/// process exit code. Errors are reported on stderr.
pub fn run(cli: Cli) -> i32 {
    let outcome = (|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            if n == 0 {
                return Err(CliError::Input("--threads must be at least 1".into()));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
        pool.install(|| dispatch(&cli.command))
    })();
    match outcome {
        Ok(code) => code.code(),
        Err(e) => {
            eprintln!("lamopt: {e}");
            e.exit_code().code()
        }
    }
}
