//! On-disk formats. Units are N, mm and MPa throughout: moduli in MPa, ply
//! thickness and panel edges in mm, running loads in N/mm (compression
//! negative), strains dimensionless, angles in degrees.

use lamopt_core::inner::{RuleKind, SearchMethod, SearchOptions};
use lamopt_core::{
    AngleSet, DesignProblem, InnerRules, LoadCase, Material, OuterRules, PlyCounts, PlyWeighting,
    Violation,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn check_version(found: u32) -> CliResult<()> {
    if found != SCHEMA_VERSION {
        return Err(CliError::Input(format!(
            "unsupported schema_version {found} (this tool reads version {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    #[serde(default)]
    pub mode: PlyWeighting,
    /// Tolerance for the realized-design margin check.
    #[serde(default = "default_margin_tol")]
    pub tol: f64,
    /// Recorded in the result; the optimizer itself is deterministic.
    #[serde(default)]
    pub seed: u64,
    /// Largest sequence count scanned exhaustively by the stacking search.
    #[serde(default = "default_exhaustive_limit")]
    pub exhaustive_limit: u64,
    #[serde(default = "default_max_nodes")]
    pub max_nodes: u64,
}

fn default_margin_tol() -> f64 {
    1e-7
}

fn default_exhaustive_limit() -> u64 {
    SearchOptions::default().exhaustive_limit as u64
}

fn default_max_nodes() -> u64 {
    SearchOptions::default().max_nodes
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            mode: PlyWeighting::default(),
            tol: default_margin_tol(),
            seed: 0,
            exhaustive_limit: default_exhaustive_limit(),
            max_nodes: default_max_nodes(),
        }
    }
}

impl SolverOptions {
    pub fn search(&self) -> SearchOptions {
        SearchOptions { exhaustive_limit: u128::from(self.exhaustive_limit), max_nodes: self.max_nodes }
    }
}

/// A design problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub material: Material,
    pub angles: Vec<f64>,
    pub loads: LoadCase,
    pub outer_rules: OuterRules,
    #[serde(default = "InnerRules::none")]
    pub inner_rules: InnerRules,
    #[serde(default)]
    pub options: SolverOptions,
}

impl ProblemFile {
    pub fn parse(path: &str, text: &str) -> CliResult<Self> {
        let file: Self =
            serde_json::from_str(text).map_err(|source| CliError::Parse { path: path.into(), source })?;
        check_version(file.schema_version)?;
        if !(file.options.tol.is_finite() && file.options.tol >= 0.0) {
            return Err(CliError::Input("options.tol must be finite and non-negative".into()));
        }
        Ok(file)
    }

    pub fn to_problem(&self) -> CliResult<DesignProblem> {
        let problem = DesignProblem {
            material: self.material,
            angles: AngleSet::new(&self.angles)?,
            loads: self.loads,
            outer_rules: self.outer_rules.clone(),
            inner_rules: self.inner_rules.clone(),
            weighting: self.options.mode,
        };
        problem.validate()?;
        Ok(problem)
    }
}

/// A half-laminate stack for `lamopt params`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackFile {
    pub schema_version: u32,
    /// Ply angles in degrees, mid-plane ply first, skin ply last.
    pub plies: Vec<f64>,
    /// Needed only for the stiffness matrices.
    #[serde(default)]
    pub material: Option<Material>,
}

impl StackFile {
    pub fn parse(path: &str, text: &str) -> CliResult<Self> {
        let file: Self =
            serde_json::from_str(text).map_err(|source| CliError::Parse { path: path.into(), source })?;
        check_version(file.schema_version)?;
        if file.plies.is_empty() {
            return Err(CliError::Input(format!("{path}: stack has no plies")));
        }
        Ok(file)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignStatus {
    Optimal,
    InfeasibleUpToCap,
    RuleInfeasible,
}

/// Signed slacks of a concrete design; feasible when all are >= 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub percentage_min: Vec<f64>,
    pub percentage_max: Vec<f64>,
    pub strain: [f64; 3],
    /// `lambda_cr - 1`; absent without compressive loads.
    pub buckling: Option<f64>,
    pub critical_mode: Option<(usize, usize)>,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterReport {
    pub xi_d: [f64; 4],
    pub margins: Margins,
    pub candidates_evaluated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub rule: RuleKind,
    pub first_position: usize,
    pub last_position: usize,
    pub observed: f64,
}

impl From<&Violation> for ViolationReport {
    fn from(v: &Violation) -> Self {
        Self { rule: v.rule, first_position: v.first_position, last_position: v.last_position, observed: v.observed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackingReport {
    /// Half laminate, mid-plane ply first.
    pub mid_to_skin: Vec<f64>,
    /// Full symmetric laminate, skin to skin.
    pub symmetric: Vec<f64>,
    pub xi_d: [f64; 4],
    /// `|xi_D target - xi_D(sequence)|^2`.
    pub residual: f64,
    /// `|xi_A target - xi_A(sequence)|^2`; zero because `xi_A` depends only on the counts.
    pub xi_a_residual: f64,
    pub method: SearchMethod,
    pub work: u64,
    pub rules_satisfied: bool,
    pub violations: Vec<ViolationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub outer_ms: f64,
    pub inner_ms: f64,
}

/// Result of `lamopt optimize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub schema_version: u32,
    pub tool_version: String,
    /// SHA-256 of the problem file bytes.
    pub input_sha256: String,
    pub status: DesignStatus,
    pub mode: PlyWeighting,
    pub seed: u64,
    pub angles: Vec<f64>,
    /// Plies in the half laminate.
    pub total_plies: Option<usize>,
    pub counts: Option<PlyCounts>,
    pub xi_a: Option<[f64; 4]>,
    pub outer: Option<OuterReport>,
    pub stacking: Option<StackingReport>,
    /// Margins recomputed from the retrieved sequence.
    pub margins: Option<Margins>,
    /// All realized margins are above `-tol` and every stacking rule holds.
    pub design_feasible: bool,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}
