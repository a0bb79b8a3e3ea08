//! Lamination-parameter kernels and a bi-level optimizer for symmetric
//! composite laminates with a finite set of ply angles.
//!
//! The feasible region of out-of-plane lamination parameters at fixed ply
//! counts is built exactly as the convex hull of the block-contiguous
//! ("extreme") stacking sequences, which lets the outer sizing problem work
//! directly with realizable parameters and makes the inner stacking retrieval
//! well posed.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.

pub mod clt;
pub mod error;
pub mod geometry;
pub mod inner;
pub mod linalg;
pub mod outer;
pub mod region;
pub mod scalar;
mod perm;

pub use clt::{PlyCounts, PlyWeighting, StackingSequence};
pub use error::{LamError, Result};
pub use scalar::{Mat3, Real, Vec4};

pub type AngleSet = clt::AngleSet<f64>;
pub type TrigSignature = clt::TrigSignature<f64>;
pub type Material = clt::Material<f64>;
pub type StrainAllowables = clt::StrainAllowables<f64>;
pub type Invariants = clt::Invariants<f64>;
pub type LamParams = clt::LamParams<f64>;
pub type LoadCase = clt::LoadCase<f64>;
pub type Buckling = clt::Buckling<f64>;
pub type FeasiblePolytope = geometry::FeasiblePolytope<f64>;
pub type AffineHull = geometry::AffineHull<f64>;
pub type LinearProgram = geometry::LinearProgram<f64>;
pub type LpSolution = geometry::LpSolution<f64>;
pub type ExtremeSequenceSet = region::ExtremeSequenceSet<f64>;
pub type Support = region::Support<f64>;
pub type VerificationReport = region::VerificationReport<f64>;
pub type OuterRules = outer::OuterRules<f64>;
pub type PlyMargins = outer::PlyMargins<f64>;
pub type XiChoice = outer::XiChoice<f64>;
pub type DesignProblem = outer::DesignProblem<f64>;
pub type OuterResult = outer::OuterResult<f64>;
pub type InnerRules = inner::InnerRules<f64>;
pub type Violation = inner::Violation<f64>;
pub type InnerResult = inner::InnerResult<f64>;
