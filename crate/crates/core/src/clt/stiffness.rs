use super::material::{Invariants, Material};
use crate::error::{LamError, Result};
use crate::scalar::{Mat3, Real, Vec4};

/// `prefactor * [U-combination linear in xi]`, the common form of `A` and `D`.
pub fn stiffness_from_params<T: Real>(xi: &Vec4<T>, prefactor: T, u: &Invariants<T>) -> Mat3<T> {
    let half = T::lit(0.5);
    let k11 = u.u1 + u.u2 * xi[0] + u.u3 * xi[1];
    let k22 = u.u1 - u.u2 * xi[0] + u.u3 * xi[1];
    let k12 = u.u4 - u.u3 * xi[1];
    let k66 = u.u5 - u.u3 * xi[1];
    let k16 = u.u2 * xi[2] * half + u.u3 * xi[3];
    let k26 = u.u2 * xi[2] * half - u.u3 * xi[3];
    let m = [[k11, k12, k16], [k12, k22, k26], [k16, k26, k66]];
    m.map(|row| row.map(|v| v * prefactor))
}

fn check_range<T: Real>(xi: &Vec4<T>) -> Result<()> {
    let limit = T::one() + T::lit(1e-9);
    match xi.iter().find(|v| !v.is_finite() || v.abs() > limit) {
        Some(v) => Err(LamError::ParameterOutOfRange { value: v.to_f64_lossy() }),
        None => Ok(()),
    }
}

/// In-plane stiffness (N/mm) of the full symmetric laminate with `n_half`
/// plies per half.
pub fn a_matrix<T: Real>(xi_a: &Vec4<T>, n_half: usize, mat: &Material<T>) -> Result<Mat3<T>> {
    check_range(xi_a)?;
    let u = mat.invariants()?;
    let h = T::lit(2.0) * T::of(n_half) * mat.ply_thickness;
    Ok(stiffness_from_params(xi_a, h, &u))
}

/// Bending stiffness (N mm) of the full symmetric laminate.
pub fn d_matrix<T: Real>(xi_d: &Vec4<T>, n_half: usize, mat: &Material<T>) -> Result<Mat3<T>> {
    check_range(xi_d)?;
    let u = mat.invariants()?;
    let h = T::lit(2.0) * T::of(n_half) * mat.ply_thickness;
    Ok(stiffness_from_params(xi_d, h * h * h / T::lit(12.0), &u))
}
