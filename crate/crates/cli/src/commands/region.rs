use std::fmt::Write as _;

use lamopt_core::geometry::{convex_hull_with, HalfSpace, HullOptions};
use lamopt_core::region::extreme_sequences;
use lamopt_core::{PlyCounts, PlyWeighting, Vec4};
use serde::Serialize;

use super::counts_and_angles;
use crate::error::{CliError, CliResult};
use crate::json;
use crate::schema::SCHEMA_VERSION;

#[derive(Debug, Serialize)]
pub struct RegionVertex {
    pub xi_d: Vec4<f64>,
    /// Extreme sequence realizing the vertex, mid-plane ply first, in degrees.
    pub sequence: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct RegionReport {
    pub schema_version: u32,
    pub counts: PlyCounts,
    pub angles: Vec<f64>,
    pub mode: PlyWeighting,
    pub affine_dim: usize,
    pub vertices: Vec<RegionVertex>,
    /// `normal . xi <= offset`.
    pub facets: Vec<HalfSpace<f64>>,
    /// `normal . xi == offset`.
    pub equalities: Vec<HalfSpace<f64>>,
}

pub fn report(counts: &[usize], angles: &[f64], mode: PlyWeighting, tol: Option<f64>) -> CliResult<RegionReport> {
    let (counts, angles) = counts_and_angles(counts, angles)?;
    let mut opts = HullOptions::default();
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        opts.hull_tol = t;
    }
    let ext = extreme_sequences(&counts, &angles, mode)?;
    let poly = convex_hull_with(&ext.points, &opts)?;
    let vertices = poly
        .vertices
        .iter()
        .map(|v| RegionVertex {
            xi_d: *v,
            sequence: ext.sequence_of(v).map(|s| s.to_angles(&angles)).unwrap_or_default(),
        })
        .collect();
    Ok(RegionReport {
        schema_version: SCHEMA_VERSION,
        counts,
        angles: angles.angles().to_vec(),
        mode,
        affine_dim: poly.affine_dim,
        vertices,
        facets: poly.facets,
        equalities: poly.equalities,
    })
}

pub fn to_json(report: &RegionReport) -> String {
    json::to_string(report)
}

/// One row per vertex: four coordinates and the sequence (space separated).
pub fn to_csv(report: &RegionReport) -> String {
    let mut out = String::from("xi1,xi2,xi3,xi4,sequence\n");
    for v in &report.vertices {
        let seq: Vec<String> = v.sequence.iter().map(|a| a.to_string()).collect();
        let [a, b, c, d] = v.xi_d;
        let _ = writeln!(out, "{a:.16e},{b:.16e},{c:.16e},{d:.16e},{}", seq.join(" "));
    }
    out
}
