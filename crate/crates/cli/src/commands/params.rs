use std::path::Path;

use lamopt_core::clt::{a_matrix, d_matrix, xi_a, xi_d};
use lamopt_core::inner::axial_difference;
use lamopt_core::{AngleSet, Mat3, PlyWeighting, StackingSequence, Vec4};
use serde::Serialize;

use super::read_text;
use crate::error::{CliError, CliResult};
use crate::json;
use crate::schema::{StackFile, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
pub struct PerMode<T> {
    pub midpoint: T,
    pub exact: T,
}

#[derive(Debug, Serialize)]
pub struct ParamsReport {
    pub schema_version: u32,
    pub plies: Vec<f64>,
    pub xi_a: Vec4<f64>,
    pub xi_d: PerMode<Vec4<f64>>,
    /// N/mm.
    pub a_matrix: Option<Mat3<f64>>,
    /// N mm.
    pub d_matrix: Option<PerMode<Mat3<f64>>>,
}

/// Distinct orientations in order of first appearance.
fn angle_set(plies: &[f64]) -> CliResult<AngleSet> {
    let mut distinct: Vec<f64> = Vec::new();
    for &p in plies {
        if !p.is_finite() {
            return Err(CliError::Input(format!("ply angle {p} is not finite")));
        }
        if !distinct.iter().any(|&d| axial_difference(d, p) <= 1e-9) {
            distinct.push(p);
        }
    }
    Ok(AngleSet::new(&distinct)?)
}

pub fn report(stack: &StackFile) -> CliResult<ParamsReport> {
    let angles = angle_set(&stack.plies)?;
    let seq = StackingSequence::from_angles(&angles, &stack.plies)?;
    let counts = seq.counts(angles.len());
    let xa = xi_a(&counts, &angles)?;
    let xd = PerMode {
        midpoint: xi_d(&seq, &angles, PlyWeighting::Midpoint)?,
        exact: xi_d(&seq, &angles, PlyWeighting::Exact)?,
    };
    let (a, d) = match &stack.material {
        Some(mat) => {
            mat.validate()?;
            let n = seq.len();
            let d = PerMode { midpoint: d_matrix(&xd.midpoint, n, mat)?, exact: d_matrix(&xd.exact, n, mat)? };
            (Some(a_matrix(&xa, n, mat)?), Some(d))
        }
        None => (None, None),
    };
    Ok(ParamsReport {
        schema_version: SCHEMA_VERSION,
        plies: stack.plies.clone(),
        xi_a: xa,
        xi_d: xd,
        a_matrix: a,
        d_matrix: d,
    })
}

pub fn run(path: &Path) -> CliResult<String> {
    let text = read_text(path)?;
    let stack = StackFile::parse(&path.display().to_string(), &text)?;
    Ok(json::to_string(&report(&stack)?))
}
