use serde::{Deserialize, Serialize};

use crate::error::{LamError, Result};
use crate::scalar::{Real, Vec4};

/// Maps an angle in degrees into the half-open interval `(-90, 90]`.
pub fn normalize_angle<T: Real>(deg: T) -> T {
    let half_turn = T::lit(180.0);
    let ninety = T::lit(90.0);
    let mut r = deg % half_turn;
    if r > ninety {
        r -= half_turn;
    } else if r <= -ninety {
        r += half_turn;
    }
    r
}

/// `(cos, sin)` of an angle in degrees, exact at multiples of 90.
fn cos_sin_deg<T: Real>(deg: T) -> (T, T) {
    let full = T::lit(360.0);
    let mut r = deg % full;
    if r < T::zero() {
        r += full;
    }
    let quarters = r / T::lit(90.0);
    if quarters.fract() == T::zero() {
        return match quarters.to_u32() {
            Some(0) | Some(4) => (T::one(), T::zero()),
            Some(1) => (T::zero(), T::one()),
            Some(2) => (-T::one(), T::zero()),
            _ => (T::zero(), -T::one()),
        };
    }
    let (s, c) = r.to_radians().sin_cos();
    (c, s)
}

/// Trigonometric signature `[cos 2t, cos 4t, sin 2t, sin 4t]` of one ply angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigSignature<T>(pub Vec4<T>);

impl<T: Real> TrigSignature<T> {
    pub fn as_array(&self) -> &Vec4<T> {
        &self.0
    }
}

/// Signature of an angle given in degrees.
pub fn zeta<T: Real>(deg: T) -> TrigSignature<T> {
    let theta = normalize_angle(deg);
    let (c2, s2) = cos_sin_deg(theta * T::lit(2.0));
    let (c4, s4) = cos_sin_deg(theta * T::lit(4.0));
    TrigSignature([c2, c4, s2, s4])
}

/// The finite set of admissible ply orientations, in degrees.
///
/// Angles are normalized on construction; the order given by the caller is
/// kept because ply counts and sequences index into it.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSet<T> {
    angles: Vec<T>,
    signatures: Vec<TrigSignature<T>>,
}

impl<T: Real> AngleSet<T> {
    pub const MAX_ANGLES: usize = 8;

    pub fn new(angles: &[T]) -> Result<Self> {
        if angles.is_empty() || angles.len() > Self::MAX_ANGLES {
            return Err(LamError::AngleSet(format!(
                "expected 1..={} angles, got {}",
                Self::MAX_ANGLES,
                angles.len()
            )));
        }
        let mut normalized = Vec::with_capacity(angles.len());
        for &a in angles {
            if !a.is_finite() {
                return Err(LamError::AngleSet("non-finite angle".into()));
            }
            let n = normalize_angle(a);
            if normalized
                .iter()
                .any(|&m: &T| (m - n).abs() <= T::lit(1e-9))
            {
                return Err(LamError::AngleSet(format!(
                    "angle {a} duplicates another angle after normalization"
                )));
            }
            normalized.push(n);
        }
        let signatures = normalized.iter().map(|&a| zeta(a)).collect();
        Ok(Self { angles: normalized, signatures })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn angle(&self, index: usize) -> T {
        self.angles[index]
    }

    pub fn signature(&self, index: usize) -> &Vec4<T> {
        &self.signatures[index].0
    }

    pub fn signatures(&self) -> &[TrigSignature<T>] {
        &self.signatures
    }

    /// Index of `deg` (after normalization), if it belongs to the set.
    pub fn index_of(&self, deg: T) -> Option<usize> {
        let n = normalize_angle(deg);
        self.angles.iter().position(|&a| (a - n).abs() <= T::lit(1e-9))
    }
}
