use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::angles::AngleSet;
use crate::error::{LamError, Result};
use crate::scalar::{Real, Vec4};

/// Number of plies at each angle of an [`AngleSet`], for one symmetric half.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlyCounts(Vec<usize>);

impl PlyCounts {
    pub fn new(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of angles the counts are defined over.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total plies in the half laminate, `N`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn get(&self, k: usize) -> usize {
        self.0[k]
    }

    pub(crate) fn check<T: Real>(&self, angles: &AngleSet<T>) -> Result<()> {
        if self.len() != angles.len() {
            return Err(LamError::DimensionMismatch { expected: angles.len(), found: self.len() });
        }
        if self.total() == 0 {
            return Err(LamError::DegenerateLaminate("ply counts sum to zero"));
        }
        Ok(())
    }
}

impl From<Vec<usize>> for PlyCounts {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for PlyCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Half of a symmetric laminate as indices into an [`AngleSet`].
///
/// `plies()[0]` is the ply adjacent to the mid-plane, the last entry is the
/// skin ply. The full laminate is this sequence mirrored about the mid-plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StackingSequence(Vec<usize>);

impl StackingSequence {
    pub fn new(plies: Vec<usize>) -> Self {
        Self(plies)
    }

    /// Looks up each angle (degrees) in `angles`.
    pub fn from_angles<T: Real>(angles: &AngleSet<T>, degrees: &[T]) -> Result<Self> {
        degrees
            .iter()
            .map(|&d| {
                angles
                    .index_of(d)
                    .ok_or_else(|| LamError::AngleSet(format!("ply angle {d} not in angle set")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn plies(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn counts(&self, n_angles: usize) -> PlyCounts {
        let mut c = vec![0; n_angles];
        for &k in &self.0 {
            c[k] += 1;
        }
        PlyCounts(c)
    }

    pub fn to_angles<T: Real>(&self, angles: &AngleSet<T>) -> Vec<T> {
        self.0.iter().map(|&k| angles.angle(k)).collect()
    }

    /// Full laminate from skin to skin: the half reversed, then the half.
    pub fn symmetric_expansion<T: Real>(&self, angles: &AngleSet<T>) -> Vec<T> {
        let half = self.to_angles(angles);
        half.iter().rev().chain(half.iter()).copied().collect()
    }

    /// Lexicographic order of the index sequences read from the skin inward.
    pub fn cmp_skin_inward(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }

    /// True when plies of each orientation form a single contiguous block.
    pub fn is_block_contiguous(&self) -> bool {
        let mut seen = Vec::new();
        for (i, &k) in self.0.iter().enumerate() {
            if i > 0 && self.0[i - 1] == k {
                continue;
            }
            if seen.contains(&k) {
                return false;
            }
            seen.push(k);
        }
        true
    }
}

/// Through-thickness weighting of the bending lamination parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlyWeighting {
    /// `z_i^2 dz` with `z_i` at the ply mid-surface.
    #[default]
    Midpoint,
    /// `(z_top^3 - z_bot^3) / 3`, the exact integral of `z^2` over the ply.
    Exact,
}

impl PlyWeighting {
    pub fn name(self) -> &'static str {
        match self {
            PlyWeighting::Midpoint => "midpoint",
            PlyWeighting::Exact => "exact",
        }
    }
}

impl FromStr for PlyWeighting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "midpoint" => Ok(PlyWeighting::Midpoint),
            "exact" => Ok(PlyWeighting::Exact),
            other => Err(format!("unknown weighting '{other}' (expected midpoint or exact)")),
        }
    }
}

impl fmt::Display for PlyWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Normalized bending weight of ply `i` (1-based, counted from the mid-plane)
/// in a half laminate of `n` plies: `3 z_i^2 dz / h^3` with `dz = 1`, `h = n`.
///
/// Weights increase strictly with `i`. They sum to `1 - 1/(4 n^2)` in
/// midpoint mode and to exactly 1 in exact mode.
pub fn ply_weight<T: Real>(i: usize, n: usize, weighting: PlyWeighting) -> T {
    let fi = T::of(i);
    let nf = T::of(n);
    let cube = nf * nf * nf;
    match weighting {
        PlyWeighting::Midpoint => {
            let z = fi - T::lit(0.5);
            T::lit(3.0) * z * z / cube
        }
        PlyWeighting::Exact => {
            // i^3 - (i-1)^3
            (T::lit(3.0) * fi * fi - T::lit(3.0) * fi + T::one()) / cube
        }
    }
}

/// In-plane lamination parameters `(1/N) sum_k n_k zeta(Theta_k)`.
pub fn xi_a<T: Real>(counts: &PlyCounts, angles: &AngleSet<T>) -> Result<Vec4<T>> {
    counts.check(angles)?;
    let n = T::of(counts.total());
    let mut xi = [T::zero(); 4];
    for (k, &nk) in counts.as_slice().iter().enumerate() {
        let z = angles.signature(k);
        for j in 0..4 {
            xi[j] += T::of(nk) * z[j];
        }
    }
    Ok(xi.map(|v| v / n))
}

/// Out-of-plane lamination parameters of a half laminate.
pub fn xi_d<T: Real>(
    seq: &StackingSequence,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
) -> Result<Vec4<T>> {
    if seq.is_empty() {
        return Err(LamError::DegenerateLaminate("empty stacking sequence"));
    }
    if let Some(&bad) = seq.plies().iter().find(|&&k| k >= angles.len()) {
        return Err(LamError::DimensionMismatch { expected: angles.len(), found: bad + 1 });
    }
    let n = seq.len();
    let mut xi = [T::zero(); 4];
    for (pos, &k) in seq.plies().iter().enumerate() {
        let w: T = ply_weight(pos + 1, n, weighting);
        let z = angles.signature(k);
        for j in 0..4 {
            xi[j] += w * z[j];
        }
    }
    Ok(xi)
}

/// In-plane and bending lamination parameters of one half laminate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LamParams<T> {
    pub xi_a: Vec4<T>,
    pub xi_d: Vec4<T>,
}

pub fn lamination_params<T: Real>(
    seq: &StackingSequence,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
) -> Result<LamParams<T>> {
    let xi_d = xi_d(seq, angles, weighting)?;
    let xi_a = xi_a(&seq.counts(angles.len()), angles)?;
    Ok(LamParams { xi_a, xi_d })
}
