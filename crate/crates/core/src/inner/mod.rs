//! Inner problem: a concrete stacking sequence for fixed ply counts whose
//! bending parameters are as close as possible to a target, subject to
//! stacking rules.
//!
//! The in-plane parameters depend only on the counts, so at fixed counts the
//! objective reduces to `|xi_D target - xi_D(seq)|^2`.

mod rules;
mod search;

pub use rules::{axial_difference, check_rules, InnerRules, RuleKind, Violation};
pub use search::{
    polish, retrieve_branch_and_bound, retrieve_exhaustive, retrieve_stacking, InnerResult,
    SearchMethod, SearchOptions,
};
