use serde::{Deserialize, Serialize};

use crate::error::{LamError, Result};
use crate::scalar::{Mat3, Real};

/// Strain allowables (dimensionless strain, all positive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrainAllowables<T> {
    pub tension: T,
    pub compression: T,
    pub shear: T,
}

/// Orthotropic ply material. Moduli in MPa, ply thickness in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material<T> {
    pub e1: T,
    pub e2: T,
    pub g12: T,
    pub nu12: T,
    pub ply_thickness: T,
    pub allowables: StrainAllowables<T>,
}

/// Stiffness invariants `U1..U5` of the reduced stiffness matrix (MPa).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Invariants<T> {
    pub u1: T,
    pub u2: T,
    pub u3: T,
    pub u4: T,
    pub u5: T,
}

impl<T: Real> Material<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("E1", self.e1),
            ("E2", self.e2),
            ("G12", self.g12),
            ("ply_thickness", self.ply_thickness),
            ("tension allowable", self.allowables.tension),
            ("compression allowable", self.allowables.compression),
            ("shear allowable", self.allowables.shear),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > T::zero()) {
                return Err(LamError::Material(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let limit = (self.e1 / self.e2).sqrt();
        if !(self.nu12.is_finite() && self.nu12 >= T::zero() && self.nu12 < limit) {
            return Err(LamError::Material(format!(
                "nu12 = {} outside the admissible range [0, {limit})",
                self.nu12
            )));
        }
        Ok(())
    }

    /// Plane-stress reduced stiffness `Q` in the material axes.
    pub fn reduced_stiffness(&self) -> Result<Mat3<T>> {
        self.validate()?;
        let nu21 = self.nu12 * self.e2 / self.e1;
        let denom = T::one() - self.nu12 * nu21;
        let q11 = self.e1 / denom;
        let q22 = self.e2 / denom;
        let q12 = self.nu12 * self.e2 / denom;
        let z = T::zero();
        Ok([[q11, q12, z], [q12, q22, z], [z, z, self.g12]])
    }

    pub fn invariants(&self) -> Result<Invariants<T>> {
        let q = self.reduced_stiffness()?;
        let (q11, q22, q12, q66) = (q[0][0], q[1][1], q[0][1], q[2][2]);
        let c = |v: f64| T::lit(v);
        Ok(Invariants {
            u1: (c(3.0) * q11 + c(3.0) * q22 + c(2.0) * q12 + c(4.0) * q66) / c(8.0),
            u2: (q11 - q22) / c(2.0),
            u3: (q11 + q22 - c(2.0) * q12 - c(4.0) * q66) / c(8.0),
            u4: (q11 + q22 + c(6.0) * q12 - c(4.0) * q66) / c(8.0),
            u5: (q11 + q22 - c(2.0) * q12 + c(4.0) * q66) / c(8.0),
        })
    }
}
