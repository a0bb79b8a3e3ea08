use serde::{Deserialize, Serialize};

use crate::error::{LamError, Result};
use crate::linalg::solve3;
use crate::scalar::{Mat3, Real};

/// Membrane loading and panel geometry.
///
/// Running loads in N/mm with compression negative; panel edges in mm.
/// `max_mode` bounds the half-wave numbers scanned in each direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadCase<T> {
    pub nx: T,
    pub ny: T,
    pub nxy: T,
    pub plate_a: T,
    pub plate_b: T,
    #[serde(default = "default_max_mode")]
    pub max_mode: usize,
}

fn default_max_mode() -> usize {
    4
}

impl<T: Real> LoadCase<T> {
    pub fn validate(&self) -> Result<()> {
        if ![self.nx, self.ny, self.nxy].iter().all(|v| v.is_finite()) {
            return Err(LamError::LoadCase("running loads must be finite".into()));
        }
        if !(self.plate_a > T::zero() && self.plate_b > T::zero())
            || !self.plate_a.is_finite()
            || !self.plate_b.is_finite()
        {
            return Err(LamError::LoadCase("plate dimensions must be positive".into()));
        }
        if self.max_mode == 0 {
            return Err(LamError::LoadCase("max_mode must be at least 1".into()));
        }
        Ok(())
    }

    pub fn has_compression(&self) -> bool {
        self.nx < T::zero() || self.ny < T::zero()
    }

    /// Same panel and modes with all running loads multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self { nx: self.nx * factor, ny: self.ny * factor, nxy: self.nxy * factor, ..*self }
    }
}

/// Mid-plane strains `[eps_x, eps_y, gamma_xy]` under membrane loads.
/// Symmetric laminates have no membrane-bending coupling, so `eps = A^-1 N`.
pub fn membrane_strain<T: Real>(a: &Mat3<T>, loads: &LoadCase<T>) -> Result<[T; 3]> {
    solve3(a, &[loads.nx, loads.ny, loads.nxy])
}

/// Critical buckling factor and the half-wave numbers `(m, p)` that produce it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Buckling<T> {
    pub factor: T,
    pub m: usize,
    pub p: usize,
}

/// Load factor of mode `(m, p)` for a simply supported orthotropic plate, or
/// `None` when the mode is not loaded in compression. `D16`/`D26` are ignored.
pub fn mode_factor<T: Real>(d: &Mat3<T>, loads: &LoadCase<T>, m: usize, p: usize) -> Option<T> {
    let alpha = T::of(m) / loads.plate_a;
    let beta = T::of(p) / loads.plate_b;
    let (a2, b2) = (alpha * alpha, beta * beta);
    let denom = -loads.nx * a2 - loads.ny * b2;
    if denom <= T::zero() {
        return None;
    }
    let num = d[0][0] * a2 * a2
        + T::lit(2.0) * (d[0][1] + T::lit(2.0) * d[2][2]) * a2 * b2
        + d[1][1] * b2 * b2;
    let pi = T::from_f64(std::f64::consts::PI).unwrap();
    Some(pi * pi * num / denom)
}

/// Smallest mode factor over `1..=max_mode` in each direction; the first
/// minimizer in `(m, p)` order wins ties.
pub fn buckling_factor<T: Real>(d: &Mat3<T>, loads: &LoadCase<T>) -> Result<Buckling<T>> {
    if !loads.has_compression() {
        return Err(LamError::BucklingNotApplicable);
    }
    let mut best: Option<Buckling<T>> = None;
    for m in 1..=loads.max_mode {
        for p in 1..=loads.max_mode {
            if let Some(f) = mode_factor(d, loads, m, p) {
                if best.is_none_or(|b| f < b.factor) {
                    best = Some(Buckling { factor: f, m, p });
                }
            }
        }
    }
    best.ok_or(LamError::BucklingNotApplicable)
}
