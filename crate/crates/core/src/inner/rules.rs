use serde::{Deserialize, Serialize};

use crate::clt::{normalize_angle, AngleSet, StackingSequence};
use crate::error::{LamError, Result};
use crate::scalar::Real;

/// Stacking rules checked on the half laminate. Zero / empty disables a rule.
///
/// Contiguity is counted within the stored half only; the mirrored block at
/// the mid-plane is not added.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerRules<T> {
    /// Largest run of identical adjacent plies.
    #[serde(default)]
    pub max_contiguous: usize,
    /// Angles (degrees) allowed for the skin ply.
    #[serde(default)]
    pub outer_ply_angles: Vec<T>,
    /// Largest change of orientation between neighbouring plies, degrees.
    #[serde(default)]
    pub max_disorientation: T,
}

impl<T: Real> InnerRules<T> {
    pub fn none() -> Self {
        Self { max_contiguous: 0, outer_ply_angles: vec![], max_disorientation: T::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.max_disorientation.is_finite() && self.max_disorientation >= T::zero()) {
            return Err(LamError::Rules("max_disorientation must be finite and non-negative".into()));
        }
        if self.outer_ply_angles.iter().any(|a| !a.is_finite()) {
            return Err(LamError::Rules("outer ply angles must be finite".into()));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.max_contiguous == 0 && self.outer_ply_angles.is_empty() && self.max_disorientation == T::zero()
    }

    pub(crate) fn skin_allowed(&self, angle: T) -> bool {
        self.outer_ply_angles.is_empty()
            || self
                .outer_ply_angles
                .iter()
                .any(|&a| axial_difference(a, angle) <= T::lit(1e-9))
    }

    pub(crate) fn step_allowed(&self, a: T, b: T) -> bool {
        self.max_disorientation == T::zero()
            || axial_difference(a, b) <= self.max_disorientation + T::lit(1e-9)
    }
}

/// Angle between two ply orientations, in `[0, 90]` degrees.
pub fn axial_difference<T: Real>(a: T, b: T) -> T {
    let d = normalize_angle(a - b).abs();
    d.min(T::lit(180.0) - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    MaxContiguous,
    SkinPly,
    Disorientation,
}

/// A rule breach: 1-based ply positions (mid-plane = 1) and the offending value
/// (run length, skin angle, or orientation jump in degrees).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation<T> {
    pub rule: RuleKind,
    pub first_position: usize,
    pub last_position: usize,
    pub observed: T,
}

pub fn check_rules<T: Real>(
    seq: &StackingSequence,
    rules: &InnerRules<T>,
    angles: &AngleSet<T>,
) -> Vec<Violation<T>> {
    let plies = seq.plies();
    let mut out = Vec::new();
    if plies.is_empty() {
        return out;
    }
    if rules.max_contiguous > 0 {
        let mut start = 0;
        for i in 1..=plies.len() {
            if i == plies.len() || plies[i] != plies[start] {
                let run = i - start;
                if run > rules.max_contiguous {
                    out.push(Violation {
                        rule: RuleKind::MaxContiguous,
                        first_position: start + 1,
                        last_position: i,
                        observed: T::of(run),
                    });
                }
                start = i;
            }
        }
    }
    let skin = angles.angle(*plies.last().unwrap());
    if !rules.skin_allowed(skin) {
        out.push(Violation {
            rule: RuleKind::SkinPly,
            first_position: plies.len(),
            last_position: plies.len(),
            observed: skin,
        });
    }
    if rules.max_disorientation > T::zero() {
        for i in 1..plies.len() {
            let (a, b) = (angles.angle(plies[i - 1]), angles.angle(plies[i]));
            if !rules.step_allowed(a, b) {
                out.push(Violation {
                    rule: RuleKind::Disorientation,
                    first_position: i,
                    last_position: i + 1,
                    observed: axial_difference(a, b),
                });
            }
        }
    }
    out
}
