//! Classical laminate theory for symmetric laminates with a finite angle set.
//!
//! Conventions shared by the whole crate:
//! * only one half of the symmetric laminate is stored; ply 1 touches the
//!   mid-plane and ply `N` is the skin ply;
//! * angles are degrees, normalized into `(-90, 90]`;
//! * units are N, mm and MPa (running loads in N/mm, `D` in N mm).

mod angles;
mod lamination;
mod material;
mod response;
mod stiffness;

pub use angles::{normalize_angle, zeta, AngleSet, TrigSignature};
pub use lamination::{
    lamination_params, ply_weight, xi_a, xi_d, LamParams, PlyCounts, PlyWeighting,
    StackingSequence,
};
pub use material::{Invariants, Material, StrainAllowables};
pub use response::{buckling_factor, membrane_strain, mode_factor, Buckling, LoadCase};
pub use stiffness::{a_matrix, d_matrix, stiffness_from_params};
