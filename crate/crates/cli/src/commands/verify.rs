use lamopt_core::region::verify_region;
use lamopt_core::{PlyWeighting, VerificationReport};

use super::counts_and_angles;
use crate::error::{CliError, CliResult, ExitCode};
use crate::json;

pub struct VerifyArgs<'a> {
    pub counts: &'a [usize],
    pub angles: &'a [f64],
    pub samples: usize,
    pub seed: u64,
    pub mode: PlyWeighting,
    pub tol: f64,
}

pub fn report(args: &VerifyArgs<'_>) -> CliResult<VerificationReport> {
    let (counts, angles) = counts_and_angles(args.counts, args.angles)?;
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(CliError::Input("--tol must be positive".into()));
    }
    Ok(verify_region(&counts, &angles, args.mode, args.samples, args.seed, args.tol)?)
}

/// JSON report and the exit code (success iff every check passed).
pub fn run(args: &VerifyArgs<'_>) -> CliResult<(String, ExitCode)> {
    let rep = report(args)?;
    let code = if rep.passed { ExitCode::Success } else { ExitCode::VerificationFailed };
    Ok((json::to_string(&rep), code))
}
