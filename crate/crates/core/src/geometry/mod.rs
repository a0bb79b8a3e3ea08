//! Low-dimensional convex geometry and a small dense LP solver.

mod affine;
mod hull;
mod lp;
mod polytope;

pub use affine::{affine_hull, AffineHull};
pub use hull::{convex_hull, convex_hull_with, HullOptions};
pub use lp::{in_convex_hull, solve_lp, LinearProgram, LpSolution, LpStatus};
pub use polytope::{FeasiblePolytope, HalfSpace};
