use serde::{Deserialize, Serialize};

use crate::scalar::{dot4, Real, Vec4};

/// `normal . x <= offset` (inequality) or `normal . x == offset` (equality).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace<T> {
    pub normal: Vec4<T>,
    pub offset: T,
}

impl<T: Real> HalfSpace<T> {
    /// Signed amount by which `x` exceeds the bound.
    pub fn excess(&self, x: &Vec4<T>) -> T {
        dot4(&self.normal, x) - self.offset
    }
}

/// Convex polytope in 4-space given by both its vertices and an
/// inequality/equality description `{x : A x <= b, C x = d}`.
///
/// Lower-dimensional polytopes carry explicit equalities for the directions
/// orthogonal to their affine hull instead of thin slabs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasiblePolytope<T> {
    pub vertices: Vec<Vec4<T>>,
    pub facets: Vec<HalfSpace<T>>,
    pub equalities: Vec<HalfSpace<T>>,
    pub affine_dim: usize,
}

impl<T: Real> FeasiblePolytope<T> {
    /// Largest constraint violation at `x` (non-positive inside).
    pub fn violation(&self, x: &Vec4<T>) -> T {
        let ineq = self.facets.iter().map(|f| f.excess(x));
        let eq = self.equalities.iter().map(|e| e.excess(x).abs());
        ineq.chain(eq).fold(T::neg_infinity(), T::max)
    }

    pub fn contains(&self, x: &Vec4<T>, tol: T) -> bool {
        self.facets.iter().all(|f| f.excess(x) <= tol)
            && self.equalities.iter().all(|e| e.excess(x).abs() <= tol)
    }

    /// `(A, b)` of the inequality system.
    pub fn inequality_system(&self) -> (Vec<Vec4<T>>, Vec<T>) {
        self.facets.iter().map(|f| (f.normal, f.offset)).unzip()
    }

    /// `(C, d)` of the equality system.
    pub fn equality_system(&self) -> (Vec<Vec4<T>>, Vec<T>) {
        self.equalities.iter().map(|e| (e.normal, e.offset)).unzip()
    }

    pub fn vertex_centroid(&self) -> Vec4<T> {
        let n = T::of(self.vertices.len());
        let mut c = [T::zero(); 4];
        for v in &self.vertices {
            for j in 0..4 {
                c[j] += v[j];
            }
        }
        c.map(|v| v / n)
    }
}
