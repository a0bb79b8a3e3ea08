pub mod optimize;
pub mod params;
pub mod region;
pub mod verify;

use std::fs;
use std::path::Path;

use lamopt_core::{AngleSet, PlyCounts};

use crate::error::{CliError, CliResult};

pub(crate) fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

/// Writes to `path`, or to stdout when absent.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub(crate) fn counts_and_angles(counts: &[usize], angles: &[f64]) -> CliResult<(PlyCounts, AngleSet)> {
    let angles = AngleSet::new(angles)?;
    if counts.len() != angles.len() {
        return Err(CliError::Input(format!(
            "--counts has {} entries but --angles has {}",
            counts.len(),
            angles.len()
        )));
    }
    let counts = PlyCounts::new(counts.to_vec());
    if counts.total() == 0 {
        return Err(CliError::Input("--counts must contain at least one ply".into()));
    }
    Ok((counts, angles))
}
