//! Outer sizing followed by stacking retrieval, and the margin evaluation of
//! the resulting concrete laminate.

use lamopt_core::clt::xi_d;
use lamopt_core::inner::{retrieve_stacking, SearchOptions};
use lamopt_core::outer::{buckling_margin, check_ply_constraints, solve_outer, OuterStatus};
use lamopt_core::{DesignProblem, InnerResult, OuterResult, PlyMargins, Result, StackingSequence};

use crate::schema::Margins;

/// Outcome of the two stages; `inner` is absent when the outer stage failed.
#[derive(Debug, Clone)]
pub struct Design {
    pub outer: OuterResult,
    pub inner: Option<InnerResult>,
    pub realized: Option<Margins>,
}

pub fn run(problem: &DesignProblem, search: &SearchOptions) -> Result<Design> {
    let outer = solve_outer(problem)?;
    if outer.status != OuterStatus::Optimal {
        return Ok(Design { outer, inner: None, realized: None });
    }
    let (inner, realized) = retrieve(problem, &outer, search)?;
    Ok(Design { outer, inner: Some(inner), realized: Some(realized) })
}

/// Stacking retrieval for an optimal outer result.
pub fn retrieve(
    problem: &DesignProblem,
    outer: &OuterResult,
    search: &SearchOptions,
) -> Result<(InnerResult, Margins)> {
    let counts = outer.counts.as_ref().expect("optimal outer result has counts");
    let target = outer.xi_d.expect("optimal outer result has xi_D");
    let inner = retrieve_stacking(
        counts,
        &target,
        &problem.inner_rules,
        &problem.angles,
        problem.weighting,
        search,
    )?;
    let realized = sequence_margins(problem, &inner.sequence)?;
    Ok((inner, realized))
}

pub fn margins_from(ply: &PlyMargins, buckling: Option<(f64, (usize, usize))>) -> Margins {
    let b = buckling.map(|(m, _)| m);
    Margins {
        min: b.map_or(ply.min(), |m| m.min(ply.min())),
        percentage_min: ply.percentage_min.clone(),
        percentage_max: ply.percentage_max.clone(),
        strain: ply.strain,
        buckling: b,
        critical_mode: buckling.map(|(_, mode)| mode),
    }
}

/// Every constraint margin of a concrete half-laminate sequence.
pub fn sequence_margins(problem: &DesignProblem, seq: &StackingSequence) -> Result<Margins> {
    let counts = seq.counts(problem.angles.len());
    let ply = check_ply_constraints(
        &counts,
        &problem.angles,
        &problem.outer_rules,
        &problem.material,
        &problem.loads,
    )?;
    let xi = xi_d(seq, &problem.angles, problem.weighting)?;
    let buckling = buckling_margin(&xi, counts.total(), &problem.loads, &problem.material)?;
    Ok(margins_from(&ply, buckling))
}
