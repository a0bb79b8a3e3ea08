//! Outer sizing problem: fewest plies such that some ply counts satisfy the
//! percentage and strain rules and some realizable `xi_D` for those counts
//! satisfies the buckling constraint.
//!
//! `xi_A` is never a free variable here: it is a function of the counts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clt::{
    a_matrix, buckling_factor, d_matrix, membrane_strain, mode_factor, xi_a, AngleSet, LoadCase,
    Material, PlyCounts, PlyWeighting,
};
use crate::error::{LamError, Result};
use crate::geometry::{LinearProgram, LpStatus};
use crate::inner::InnerRules;
use crate::region::feasible_region;
use crate::scalar::{Real, Vec4};

/// Ply-number rules: per-angle fraction bounds and a cap on half-laminate plies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterRules<T> {
    pub min_pct: Vec<T>,
    pub max_pct: Vec<T>,
    pub max_total_plies: usize,
}

impl<T: Real> OuterRules<T> {
    /// No percentage restriction on `n_angles` angles.
    pub fn unrestricted(n_angles: usize, max_total_plies: usize) -> Self {
        Self {
            min_pct: vec![T::zero(); n_angles],
            max_pct: vec![T::one(); n_angles],
            max_total_plies,
        }
    }

    pub fn validate(&self, n_angles: usize) -> Result<()> {
        for v in [&self.min_pct, &self.max_pct] {
            if v.len() != n_angles {
                return Err(LamError::DimensionMismatch { expected: n_angles, found: v.len() });
            }
        }
        for (k, (&lo, &hi)) in self.min_pct.iter().zip(&self.max_pct).enumerate() {
            if !(T::zero() <= lo && lo <= hi && hi <= T::one()) {
                return Err(LamError::Rules(format!(
                    "angle {k}: need 0 <= min_pct <= max_pct <= 1, got [{lo}, {hi}]"
                )));
            }
        }
        let total: T = self.min_pct.iter().copied().sum();
        if total > T::one() + T::lit(1e-12) {
            return Err(LamError::Rules(format!("min_pct sums to {total} > 1")));
        }
        if self.max_total_plies == 0 {
            return Err(LamError::Rules("max_total_plies must be at least 1".into()));
        }
        Ok(())
    }
}

/// Slack tolerance for the count-only rules, absorbing `n_k / N` round-off.
const PLY_RULE_TOL: f64 = 1e-12;

/// Signed slacks of the count-dependent constraints; feasible when all are >= 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlyMargins<T> {
    /// `n_k / N - min_pct_k`.
    pub percentage_min: Vec<T>,
    /// `max_pct_k - n_k / N`.
    pub percentage_max: Vec<T>,
    /// `(allowable - |eps_j|) / allowable` for `eps_x, eps_y, gamma_xy`.
    pub strain: [T; 3],
}

impl<T: Real> PlyMargins<T> {
    pub fn min(&self) -> T {
        self.percentage_min
            .iter()
            .chain(&self.percentage_max)
            .chain(&self.strain)
            .copied()
            .fold(T::infinity(), T::min)
    }

    pub fn percentage_ok(&self) -> bool {
        let tol = -T::lit(PLY_RULE_TOL);
        self.percentage_min.iter().chain(&self.percentage_max).all(|&m| m >= tol)
    }

    pub fn is_feasible(&self) -> bool {
        self.min() >= -T::lit(PLY_RULE_TOL)
    }
}

fn percentage_margins<T: Real>(counts: &PlyCounts, rules: &OuterRules<T>) -> (Vec<T>, Vec<T>) {
    let n = T::of(counts.total());
    let frac: Vec<T> = counts.as_slice().iter().map(|&c| T::of(c) / n).collect();
    let lo = frac.iter().zip(&rules.min_pct).map(|(&f, &m)| f - m).collect();
    let hi = frac.iter().zip(&rules.max_pct).map(|(&f, &m)| m - f).collect();
    (lo, hi)
}

/// Strain margin per component; tension and compression allowables apply by
/// the sign of the normal strains, the shear allowable to `gamma_xy`.
fn strain_margins<T: Real>(strain: &[T; 3], mat: &Material<T>) -> [T; 3] {
    let al = &mat.allowables;
    let normal = |e: T| if e >= T::zero() { al.tension } else { al.compression };
    let allow = [normal(strain[0]), normal(strain[1]), al.shear];
    std::array::from_fn(|j| (allow[j] - strain[j].abs()) / allow[j])
}

pub fn check_ply_constraints<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    rules: &OuterRules<T>,
    material: &Material<T>,
    loads: &LoadCase<T>,
) -> Result<PlyMargins<T>> {
    let xa = xi_a(counts, angles)?;
    if rules.min_pct.len() != counts.len() || rules.max_pct.len() != counts.len() {
        return Err(LamError::DimensionMismatch { expected: counts.len(), found: rules.min_pct.len() });
    }
    let (percentage_min, percentage_max) = percentage_margins(counts, rules);
    let a = a_matrix(&xa, counts.total(), material)?;
    let strain = strain_margins(&membrane_strain(&a, loads)?, material);
    Ok(PlyMargins { percentage_min, percentage_max, strain })
}

/// Bending parameters chosen for fixed counts, with their buckling margin
/// `lambda_cr - 1` (`None` when no load is compressive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiChoice<T> {
    pub xi_d: Vec4<T>,
    pub buckling_margin: Option<T>,
    pub critical_mode: Option<(usize, usize)>,
}

impl<T: Real> XiChoice<T> {
    pub fn is_feasible(&self) -> bool {
        self.buckling_margin.is_none_or(|m| m >= T::zero())
    }
}

/// Buckling margin of a given `xi_D`.
pub fn buckling_margin<T: Real>(
    xi: &Vec4<T>,
    n_half: usize,
    loads: &LoadCase<T>,
    material: &Material<T>,
) -> Result<Option<(T, (usize, usize))>> {
    if !loads.has_compression() {
        return Ok(None);
    }
    let d = d_matrix(xi, n_half, material)?;
    let b = buckling_factor(&d, loads)?;
    Ok(Some((b.factor - T::one(), (b.m, b.p))))
}

/// Maximizes the buckling slack over the feasible region of `counts`.
///
/// Every mode factor is affine in `xi_D`, so on the vertex-weight simplex the
/// problem `max s  s.t.  sum_mu w_mu lambda_mp(v_mu) >= 1 + s` is an LP.
/// Without compressive loads the vertex centroid is returned.
pub fn best_xi_d<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    loads: &LoadCase<T>,
    material: &Material<T>,
    weighting: PlyWeighting,
) -> Result<XiChoice<T>> {
    let region = feasible_region(counts, angles, weighting)?;
    let n_half = counts.total();
    if !loads.has_compression() {
        return Ok(XiChoice { xi_d: region.vertex_centroid(), buckling_margin: None, critical_mode: None });
    }
    let xi = if region.vertices.len() == 1 {
        region.vertices[0]
    } else {
        let per_vertex: Vec<_> = region
            .vertices
            .iter()
            .map(|v| d_matrix(v, n_half, material))
            .collect::<Result<_>>()?;
        let nv = region.vertices.len();
        let mut objective = vec![T::zero(); nv + 1];
        objective[nv] = T::one();
        let mut lp = LinearProgram::maximize(objective);
        for m in 1..=loads.max_mode {
            for p in 1..=loads.max_mode {
                let factors: Option<Vec<T>> =
                    per_vertex.iter().map(|d| mode_factor(d, loads, m, p)).collect();
                if let Some(f) = factors {
                    // s - sum w_mu f_mu <= -1
                    let mut row: Vec<T> = f.into_iter().map(|v| -v).collect();
                    row.push(T::one());
                    lp.add_le(row, -T::one());
                }
            }
        }
        let mut simplex = vec![T::one(); nv];
        simplex.push(T::zero());
        lp.add_eq(simplex, T::one());
        for j in 0..nv {
            lp.nonnegative(j);
        }
        let sol = lp.solve()?;
        if sol.status != LpStatus::Optimal {
            return Err(LamError::Numerical(format!("buckling LP ended {:?}", sol.status)));
        }
        let w = sol.x.expect("optimal LP has a point");
        let mut xi = [T::zero(); 4];
        for (wi, v) in w.iter().zip(&region.vertices) {
            for j in 0..4 {
                xi[j] += wi.max(T::zero()) * v[j];
            }
        }
        xi
    };
    let (margin, mode) = buckling_margin(&xi, n_half, loads, material)?.expect("compressive");
    Ok(XiChoice { xi_d: xi, buckling_margin: Some(margin), critical_mode: Some(mode) })
}

/// Everything the optimizer needs, independent of any file format.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignProblem<T> {
    pub material: Material<T>,
    pub angles: AngleSet<T>,
    pub loads: LoadCase<T>,
    pub outer_rules: OuterRules<T>,
    pub inner_rules: InnerRules<T>,
    pub weighting: PlyWeighting,
}

impl<T: Real> DesignProblem<T> {
    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.loads.validate()?;
        self.outer_rules.validate(self.angles.len())?;
        self.inner_rules.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuterStatus {
    Optimal,
    InfeasibleUpToCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterMargins<T> {
    pub ply: PlyMargins<T>,
    pub buckling: Option<T>,
    pub critical_mode: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterResult<T> {
    pub status: OuterStatus,
    pub counts: Option<PlyCounts>,
    pub xi_a: Option<Vec4<T>>,
    pub xi_d: Option<Vec4<T>>,
    pub margins: Option<OuterMargins<T>>,
    /// Count vectors that passed the percentage filter and were fully evaluated.
    pub candidates_evaluated: usize,
}

/// All compositions of `total` into `parts` non-negative integers, in
/// ascending lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=rem {
            cur.push(first);
            rec(rem - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

type Accepted<T> = (PlyMargins<T>, XiChoice<T>);

fn evaluate_candidate<T: Real>(
    problem: &DesignProblem<T>,
    counts: &PlyCounts,
) -> Result<Option<Accepted<T>>> {
    let ply = check_ply_constraints(
        counts,
        &problem.angles,
        &problem.outer_rules,
        &problem.material,
        &problem.loads,
    )?;
    if !ply.is_feasible() {
        return Ok(None);
    }
    let choice = best_xi_d(counts, &problem.angles, &problem.loads, &problem.material, problem.weighting)?;
    Ok(choice.is_feasible().then_some((ply, choice)))
}

/// Scans totals `N = 1..=max_total_plies`; within a total, count vectors in
/// lexicographic order. The first feasible candidate is returned, so the
/// result has the minimum ply count and does not depend on thread count.
pub fn solve_outer<T: Real>(problem: &DesignProblem<T>) -> Result<OuterResult<T>> {
    problem.validate()?;
    let k = problem.angles.len();
    let mut evaluated = 0;
    for total in 1..=problem.outer_rules.max_total_plies {
        let candidates: Vec<PlyCounts> = compositions(total, k)
            .into_iter()
            .map(PlyCounts::new)
            .filter(|c| {
                let (lo, hi) = percentage_margins(c, &problem.outer_rules);
                let tol = -T::lit(PLY_RULE_TOL);
                lo.iter().chain(&hi).all(|&m| m >= tol)
            })
            .collect();
        evaluated += candidates.len();
        let outcomes: Vec<Result<Option<Accepted<T>>>> =
            candidates.par_iter().map(|c| evaluate_candidate(problem, c)).collect();
        for (counts, outcome) in candidates.into_iter().zip(outcomes) {
            let Some((ply, choice)) = outcome? else {
                continue;
            };
            let xa = xi_a(&counts, &problem.angles)?;
            return Ok(OuterResult {
                status: OuterStatus::Optimal,
                counts: Some(counts),
                xi_a: Some(xa),
                xi_d: Some(choice.xi_d),
                margins: Some(OuterMargins {
                    ply,
                    buckling: choice.buckling_margin,
                    critical_mode: choice.critical_mode,
                }),
                candidates_evaluated: evaluated,
            });
        }
    }
    Ok(OuterResult {
        status: OuterStatus::InfeasibleUpToCap,
        counts: None,
        xi_a: None,
        xi_d: None,
        margins: None,
        candidates_evaluated: evaluated,
    })
}
