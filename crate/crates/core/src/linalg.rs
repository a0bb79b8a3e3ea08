//! Small dense linear algebra used by the stiffness and geometry code.

use crate::error::{LamError, Result};
use crate::scalar::{Mat3, Real};

/// Solves `a * x = rhs` by Gaussian elimination with partial pivoting.
///
/// Fails with [`LamError::IllConditioned`] when a pivot falls below
/// `n * eps * max|a_ij|`.
pub fn solve_dense<T: Real>(a: &[Vec<T>], rhs: &[T]) -> Result<Vec<T>> {
    let n = rhs.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(LamError::DimensionMismatch { expected: n, found: a.len() });
    }
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() {
        return Err(LamError::IllConditioned);
    }
    let threshold = scale * T::epsilon() * T::of(n.max(1)) * T::lit(16.0);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[pivot_row][col].abs() <= threshold {
            return Err(LamError::IllConditioned);
        }
        m.swap(col, pivot_row);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != T::zero() {
                for k in col..=n {
                    let v = m[col][k];
                    m[row][k] -= f * v;
                }
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = m[row][n];
        for k in row + 1..n {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Ok(x)
}

pub fn solve3<T: Real>(a: &Mat3<T>, rhs: &[T; 3]) -> Result<[T; 3]> {
    let rows: Vec<Vec<T>> = a.iter().map(|r| r.to_vec()).collect();
    let x = solve_dense(&rows, rhs)?;
    Ok([x[0], x[1], x[2]])
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Orthogonalizes `v` against the orthonormal set `basis` (two passes of
/// modified Gram-Schmidt) and returns the residual.
pub fn orthogonalize<T: Real>(v: &[T], basis: &[Vec<T>]) -> Vec<T> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = dot(&r, q);
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= c * *qi;
            }
        }
    }
    r
}

/// Right singular vectors and singular values of the `m x d` matrix `rows`
/// via one-sided Jacobi rotations. Returns `(sigma, v)` sorted by decreasing
/// singular value; `v[k]` is the k-th right singular vector.
pub fn jacobi_svd<T: Real>(rows: &[Vec<T>], d: usize) -> (Vec<T>, Vec<Vec<T>>) {
    let m = rows.len();
    // Column-major copy so rotations touch contiguous memory.
    let mut cols: Vec<Vec<T>> = (0..d).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let mut v: Vec<Vec<T>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let eps = T::epsilon();
    for _sweep in 0..64 {
        let mut rotated = false;
        for j in 0..d {
            for k in j + 1..d {
                let alpha = dot(&cols[j], &cols[j]);
                let beta = dot(&cols[k], &cols[k]);
                let gamma = dot(&cols[j], &cols[k]);
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (xj, xk) = (cols[j][i], cols[k][i]);
                    cols[j][i] = c * xj - s * xk;
                    cols[k][i] = s * xj + c * xk;
                }
                // v stored by rows: v[r][c]; rotate columns j and k.
                for vr in v.iter_mut() {
                    let (vj, vk) = (vr[j], vr[k]);
                    vr[j] = c * vj - s * vk;
                    vr[k] = s * vj + c * vk;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<T> = cols.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).unwrap().then(a.cmp(&b)));
    let sorted_sigma = order.iter().map(|&k| sigma[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..d).map(|r| v[r][k]).collect())
        .collect();
    (sorted_sigma, vectors)
}
