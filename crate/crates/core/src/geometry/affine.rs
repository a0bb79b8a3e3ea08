use crate::linalg::jacobi_svd;
use crate::scalar::{Real, Vec4};

/// Affine hull of a point set in 4-space.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHull<T> {
    pub centroid: Vec4<T>,
    /// Orthonormal directions spanning the hull.
    pub basis: Vec<Vec4<T>>,
    /// Orthonormal directions orthogonal to the hull; `basis.len() + complement.len() == 4`.
    pub complement: Vec<Vec4<T>>,
}

impl<T: Real> AffineHull<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x - centroid` in the hull basis.
    pub fn project(&self, x: &Vec4<T>) -> Vec<T> {
        let d = crate::scalar::sub4(x, &self.centroid);
        self.basis.iter().map(|b| crate::scalar::dot4(b, &d)).collect()
    }

    /// Maps a direction in hull coordinates back to 4-space.
    pub fn lift_direction(&self, y: &[T]) -> Vec4<T> {
        let mut out = [T::zero(); 4];
        for (coef, b) in y.iter().zip(&self.basis) {
            for j in 0..4 {
                out[j] += *coef * b[j];
            }
        }
        out
    }
}

/// Affine hull of `points`: directions whose singular value falls below
/// `tol * sigma_max` (or below the dedup floor) are discarded.
///
/// # Panics
/// Panics when `points` is empty.
pub fn affine_hull<T: Real>(points: &[Vec4<T>], tol: T) -> AffineHull<T> {
    assert!(!points.is_empty(), "affine hull of an empty set");
    let n = T::of(points.len());
    let mut centroid = [T::zero(); 4];
    for p in points {
        for j in 0..4 {
            centroid[j] += p[j];
        }
    }
    centroid = centroid.map(|v| v / n);
    let rows: Vec<Vec<T>> = points
        .iter()
        .map(|p| (0..4).map(|j| p[j] - centroid[j]).collect())
        .collect();
    let (sigma, v) = jacobi_svd(&rows, 4);
    let floor = T::lit(T::DEDUP_TOL);
    let cutoff = (sigma[0] * tol).max(floor);
    let to4 = |x: &Vec<T>| [x[0], x[1], x[2], x[3]];
    let mut basis = Vec::new();
    let mut complement = Vec::new();
    for (s, dir) in sigma.iter().zip(&v) {
        if *s > cutoff {
            basis.push(to4(dir));
        } else {
            complement.push(to4(dir));
        }
    }
    AffineHull { centroid, basis, complement }
}
