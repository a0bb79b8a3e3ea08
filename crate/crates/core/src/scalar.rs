//! Scalar abstraction shared by every kernel in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the laminate kernels are generic over: `f32` or `f64`.
///
/// The associated tolerances are the defaults used by geometry and search
/// code when the caller does not supply its own.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Absolute coordinate tolerance under which two points are the same point.
    const DEDUP_TOL: f64;
    /// Absolute tolerance for hull facets, membership and vertex tests.
    const HULL_TOL: f64;
    /// Pivot tolerance of the simplex solver.
    const PIVOT_TOL: f64;

    /// Converts an `f64` literal. Panics only on non-representable input,
    /// which never happens for the finite constants used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("count fits scalar")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const DEDUP_TOL: f64 = 1e-6;
    const HULL_TOL: f64 = 1e-4;
    const PIVOT_TOL: f64 = 1e-5;
}

impl Real for f64 {
    const DEDUP_TOL: f64 = 1e-12;
    const HULL_TOL: f64 = 1e-9;
    const PIVOT_TOL: f64 = 1e-11;
}

/// Four-component vector: the layout of every lamination-parameter quantity.
pub type Vec4<T> = [T; 4];

/// Dense 3x3 matrix in row-major order (stiffness matrices in Voigt notation).
pub type Mat3<T> = [[T; 3]; 3];

#[inline]
pub fn dot4<T: Real>(a: &Vec4<T>, b: &Vec4<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[inline]
pub fn sub4<T: Real>(a: &Vec4<T>, b: &Vec4<T>) -> Vec4<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

#[inline]
pub fn dist2_4<T: Real>(a: &Vec4<T>, b: &Vec4<T>) -> T {
    let d = sub4(a, b);
    dot4(&d, &d)
}
