use std::path::Path;
use std::time::Instant;

use lamopt_core::clt::xi_a;
use lamopt_core::outer::OuterStatus;
use lamopt_core::PlyWeighting;
use sha2::{Digest, Sha256};

use super::read_text;
use crate::error::{CliResult, ExitCode};
use crate::json;
use crate::pipeline::{margins_from, retrieve};
use crate::schema::{
    DesignResult, DesignStatus, OuterReport, ProblemFile, StackingReport, Timings, ViolationReport,
    SCHEMA_VERSION, TOOL_VERSION,
};

pub struct OptimizeArgs<'a> {
    pub problem: &'a Path,
    pub mode: Option<PlyWeighting>,
    pub timings: bool,
}

pub fn design(text: &str, source: &str, mode: Option<PlyWeighting>, timings: bool) -> CliResult<DesignResult> {
    let mut file = ProblemFile::parse(source, text)?;
    if let Some(m) = mode {
        file.options.mode = m;
    }
    let problem = file.to_problem()?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));

    let clock = Instant::now();
    let outer = lamopt_core::outer::solve_outer(&problem)?;
    let outer_ms = clock.elapsed().as_secs_f64() * 1e3;

    let mut result = DesignResult {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        input_sha256: digest,
        status: DesignStatus::InfeasibleUpToCap,
        mode: problem.weighting,
        seed: file.options.seed,
        angles: problem.angles.angles().to_vec(),
        total_plies: None,
        counts: None,
        xi_a: None,
        outer: None,
        stacking: None,
        margins: None,
        design_feasible: false,
        tol: file.options.tol,
        timings: None,
    };
    if outer.status != OuterStatus::Optimal {
        if timings {
            result.timings = Some(Timings { outer_ms, inner_ms: 0.0 });
        }
        return Ok(result);
    }

    let clock = Instant::now();
    let (inner, realized) = retrieve(&problem, &outer, &file.options.search())?;
    let inner_ms = clock.elapsed().as_secs_f64() * 1e3;

    let counts = outer.counts.clone().expect("optimal");
    let om = outer.margins.as_ref().expect("optimal");
    let outer_margins = margins_from(&om.ply, om.buckling.zip(om.critical_mode));
    let xa = xi_a(&counts, &problem.angles)?;
    let realized_ok = realized.min >= -file.options.tol;

    result.status = if inner.rules_satisfied { DesignStatus::Optimal } else { DesignStatus::RuleInfeasible };
    result.total_plies = Some(counts.total());
    result.counts = Some(counts);
    result.xi_a = Some(xa);
    result.outer = Some(OuterReport {
        xi_d: outer.xi_d.expect("optimal"),
        margins: outer_margins,
        candidates_evaluated: outer.candidates_evaluated,
    });
    result.stacking = Some(StackingReport {
        mid_to_skin: inner.sequence.to_angles(&problem.angles),
        symmetric: inner.sequence.symmetric_expansion(&problem.angles),
        xi_d: inner.xi_d,
        residual: inner.residual,
        xi_a_residual: 0.0,
        method: inner.method,
        work: inner.work,
        rules_satisfied: inner.rules_satisfied,
        violations: inner.violations.iter().map(ViolationReport::from).collect(),
    });
    result.margins = Some(realized);
    result.design_feasible = realized_ok && inner.rules_satisfied;
    if timings {
        result.timings = Some(Timings { outer_ms, inner_ms });
    }
    Ok(result)
}

pub fn exit_code(result: &DesignResult) -> ExitCode {
    match result.status {
        DesignStatus::Optimal => ExitCode::Success,
        DesignStatus::InfeasibleUpToCap => ExitCode::OuterInfeasible,
        DesignStatus::RuleInfeasible => ExitCode::InnerRuleInfeasible,
    }
}

pub fn run(args: &OptimizeArgs<'_>) -> CliResult<(String, ExitCode)> {
    let text = read_text(args.problem)?;
    let result = design(&text, &args.problem.display().to_string(), args.mode, args.timings)?;
    if result.stacking.is_some() && !result.design_feasible {
        eprintln!("lamopt: warning: the retrieved stacking sequence does not meet every constraint");
    }
    Ok((json::to_string(&result), exit_code(&result)))
}
