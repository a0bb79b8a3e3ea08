//! Convex hulls of small point sets in 4-space.
//!
//! Points are first reduced to coordinates in their affine hull, so the
//! quickhull pass always runs on a full-dimensional set (dimension 2..=4);
//! the orthogonal complement becomes explicit equality constraints.

use std::collections::BTreeMap;

use super::affine::{affine_hull, AffineHull};
use super::polytope::{FeasiblePolytope, HalfSpace};
use crate::error::{LamError, Result};
use crate::linalg::{dot, norm, orthogonalize};
use crate::scalar::{dot4, Real, Vec4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullOptions<T> {
    /// Points closer than this in every coordinate are merged.
    pub dedup_tol: T,
    /// Visibility, coplanarity and membership tolerance.
    pub hull_tol: T,
    /// Relative singular-value cutoff for the affine hull.
    pub affine_tol: T,
}

impl<T: Real> Default for HullOptions<T> {
    fn default() -> Self {
        Self {
            dedup_tol: T::lit(T::DEDUP_TOL),
            hull_tol: T::lit(T::HULL_TOL),
            affine_tol: T::lit(T::HULL_TOL),
        }
    }
}

pub fn convex_hull<T: Real>(points: &[Vec4<T>]) -> Result<FeasiblePolytope<T>> {
    convex_hull_with(points, &HullOptions::default())
}

pub fn convex_hull_with<T: Real>(
    points: &[Vec4<T>],
    opts: &HullOptions<T>,
) -> Result<FeasiblePolytope<T>> {
    if points.is_empty() {
        return Err(LamError::EmptyInput);
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(LamError::Numerical("non-finite hull input".into()));
    }
    let pts = dedup(points, opts.dedup_tol);
    let aff = affine_hull(&pts, opts.affine_tol);
    let equalities: Vec<HalfSpace<T>> = aff
        .complement
        .iter()
        .map(|u| HalfSpace { normal: *u, offset: dot4(u, &aff.centroid) })
        .collect();

    match aff.dim() {
        0 => {
            let p = pts[0];
            let equalities = (0..4)
                .map(|j| {
                    let mut normal = [T::zero(); 4];
                    normal[j] = T::one();
                    HalfSpace { normal, offset: p[j] }
                })
                .collect();
            Ok(FeasiblePolytope { vertices: vec![p], facets: vec![], equalities, affine_dim: 0 })
        }
        1 => {
            let ys: Vec<T> = pts.iter().map(|p| aff.project(p)[0]).collect();
            let (mut lo, mut hi) = (0, 0);
            for (i, &y) in ys.iter().enumerate() {
                if y < ys[lo] {
                    lo = i;
                }
                if y > ys[hi] {
                    hi = i;
                }
            }
            let facets = vec![
                lift(&aff, &[T::one()], ys[hi]),
                lift(&aff, &[-T::one()], -ys[lo]),
            ];
            let mut idx = vec![lo, hi];
            idx.sort_unstable();
            Ok(FeasiblePolytope {
                vertices: idx.into_iter().map(|i| pts[i]).collect(),
                facets,
                equalities,
                affine_dim: 1,
            })
        }
        r => {
            let reduced: Vec<Vec<T>> = pts.iter().map(|p| aff.project(p)).collect();
            let raw = quickhull(&reduced, r, opts.hull_tol)?;
            let merged = merge_facets(&raw, opts.hull_tol);
            let vertices = extreme_vertices(&reduced, &raw, &merged, r, opts.hull_tol);
            let facets = merged.iter().map(|(n, off)| lift(&aff, n, *off)).collect();
            Ok(FeasiblePolytope {
                vertices: vertices.into_iter().map(|i| pts[i]).collect(),
                facets,
                equalities,
                affine_dim: r,
            })
        }
    }
}

/// `n . y <= off` in hull coordinates, expressed in 4-space.
fn lift<T: Real>(aff: &AffineHull<T>, n: &[T], off: T) -> HalfSpace<T> {
    let normal = aff.lift_direction(n);
    HalfSpace { normal, offset: off + dot4(&normal, &aff.centroid) }
}

/// Drops points within `tol` (per coordinate) of an earlier point; keeps input order.
fn dedup<T: Real>(points: &[Vec4<T>], tol: T) -> Vec<Vec4<T>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].partial_cmp(&points[b][0]).unwrap().then(a.cmp(&b)));
    let same = |a: &Vec4<T>, b: &Vec4<T>| (0..4).all(|j| (a[j] - b[j]).abs() <= tol);
    let mut kept: Vec<usize> = Vec::new();
    let mut keep_flag = vec![false; points.len()];
    // Within an x-window, keep the earliest input index of each cluster.
    for (pos, &i) in order.iter().enumerate() {
        let mut dup = false;
        for &j in order[..pos].iter().rev() {
            if points[i][0] - points[j][0] > tol {
                break;
            }
            if keep_flag[j] && same(&points[i], &points[j]) {
                dup = true;
                break;
            }
        }
        if !dup {
            keep_flag[i] = true;
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter().map(|i| points[i]).collect()
}

#[derive(Debug, Clone)]
struct Facet<T> {
    verts: Vec<usize>,
    normal: Vec<T>,
    offset: T,
    outside: Vec<usize>,
    alive: bool,
}

impl<T: Real> Facet<T> {
    fn distance(&self, p: &[T]) -> T {
        dot(&self.normal, p) - self.offset
    }
}

/// Oriented hyperplane through `verts` with `interior` on the negative side.
fn hyperplane<T: Real>(pts: &[Vec<T>], verts: &[usize], interior: &[T]) -> Option<(Vec<T>, T)> {
    let d = interior.len();
    let v0 = &pts[verts[0]];
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(d);
    for &k in &verts[1..] {
        let e: Vec<T> = pts[k].iter().zip(v0).map(|(a, b)| *a - *b).collect();
        let r = orthogonalize(&e, &basis);
        let len = norm(&r);
        if len <= T::epsilon() {
            return None;
        }
        basis.push(r.into_iter().map(|x| x / len).collect());
    }
    let mut best: Option<Vec<T>> = None;
    let mut best_len = T::zero();
    for axis in 0..d {
        let mut e = vec![T::zero(); d];
        e[axis] = T::one();
        let r = orthogonalize(&e, &basis);
        let len = norm(&r);
        if len > best_len {
            best_len = len;
            best = Some(r);
        }
    }
    let mut n: Vec<T> = best?.into_iter().map(|x| x / best_len).collect();
    let mut off = verts.iter().map(|&k| dot(&n, &pts[k])).sum::<T>() / T::of(verts.len());
    if dot(&n, interior) - off > T::zero() {
        n.iter_mut().for_each(|x| *x = -*x);
        off = -off;
    }
    Some((n, off))
}

fn quickhull<T: Real>(pts: &[Vec<T>], d: usize, tol: T) -> Result<Vec<Facet<T>>> {
    // Initial simplex: repeatedly take the point farthest from the current span.
    let start = (0..pts.len())
        .min_by(|&a, &b| pts[a][0].partial_cmp(&pts[b][0]).unwrap().then(a.cmp(&b)))
        .unwrap();
    let mut simplex = vec![start];
    let mut span: Vec<Vec<T>> = Vec::new();
    while simplex.len() < d + 1 {
        let mut best = None;
        let mut best_len = tol;
        for (i, p) in pts.iter().enumerate() {
            let e: Vec<T> = p.iter().zip(&pts[start]).map(|(a, b)| *a - *b).collect();
            let len = norm(&orthogonalize(&e, &span));
            if len > best_len {
                best_len = len;
                best = Some((i, e));
            }
        }
        let (i, e) = best.ok_or_else(|| {
            LamError::Numerical("point set is flatter than its affine hull".into())
        })?;
        let r = orthogonalize(&e, &span);
        let len = norm(&r);
        span.push(r.into_iter().map(|x| x / len).collect());
        simplex.push(i);
    }
    let mut interior = vec![T::zero(); d];
    for &i in &simplex {
        for j in 0..d {
            interior[j] += pts[i][j];
        }
    }
    interior.iter_mut().for_each(|x| *x /= T::of(d + 1));

    let mut facets: Vec<Facet<T>> = Vec::new();
    for omit in 0..=d {
        let verts: Vec<usize> =
            simplex.iter().enumerate().filter(|(k, _)| *k != omit).map(|(_, &i)| i).collect();
        let (normal, offset) = hyperplane(pts, &verts, &interior)
            .ok_or_else(|| LamError::Numerical("degenerate initial simplex".into()))?;
        facets.push(Facet { verts, normal, offset, outside: vec![], alive: true });
    }
    let mut pending: Vec<usize> = (0..pts.len()).filter(|i| !simplex.contains(i)).collect();
    assign(&mut facets, 0, &pending, pts, tol);

    let max_rounds = 8;
    for _round in 0..max_rounds {
        while let Some(fi) = facets.iter().position(|f| f.alive && !f.outside.is_empty()) {
            let eye = {
                let f = &facets[fi];
                let mut best = f.outside[0];
                let mut best_d = f.distance(&pts[best]);
                for &p in &f.outside[1..] {
                    let dp = f.distance(&pts[p]);
                    if dp > best_d {
                        best = p;
                        best_d = dp;
                    }
                }
                best
            };
            let visible: Vec<usize> = (0..facets.len())
                .filter(|&k| facets[k].alive && facets[k].distance(&pts[eye]) > tol)
                .collect();
            let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut orphans = Vec::new();
            for &k in &visible {
                let f = &mut facets[k];
                f.alive = false;
                orphans.extend(f.outside.drain(..).filter(|&p| p != eye));
                for skip in 0..f.verts.len() {
                    let mut ridge: Vec<usize> = f
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    ridge.sort_unstable();
                    *ridges.entry(ridge).or_insert(0) += 1;
                }
            }
            let first_new = facets.len();
            for (ridge, count) in ridges {
                if count != 1 {
                    continue;
                }
                let mut verts = ridge;
                verts.push(eye);
                if let Some((normal, offset)) = hyperplane(pts, &verts, &interior) {
                    facets.push(Facet { verts, normal, offset, outside: vec![], alive: true });
                }
            }
            assign(&mut facets, first_new, &orphans, pts, tol);
        }
        // Re-check every point against the finished hull; stragglers go back in.
        pending.clear();
        let mut dirty = false;
        for (i, p) in pts.iter().enumerate() {
            if let Some(k) = facets.iter().position(|f| f.alive && f.distance(p) > tol) {
                if !facets[k].verts.contains(&i) {
                    facets[k].outside.push(i);
                    dirty = true;
                }
            }
        }
        if !dirty {
            facets.retain(|f| f.alive);
            return Ok(facets);
        }
    }
    Err(LamError::Numerical("quickhull did not converge".into()))
}

fn assign<T: Real>(facets: &mut [Facet<T>], from: usize, points: &[usize], pts: &[Vec<T>], tol: T) {
    for &p in points {
        if let Some(f) = facets[from..].iter_mut().find(|f| f.alive && f.distance(&pts[p]) > tol) {
            f.outside.push(p);
        }
    }
}

/// Collapses coplanar simplicial facets into one hyperplane each.
fn merge_facets<T: Real>(facets: &[Facet<T>], tol: T) -> Vec<(Vec<T>, T)> {
    let normal_tol = T::lit(1e-7);
    let mut merged: Vec<(Vec<T>, T)> = Vec::new();
    for f in facets {
        let dup = merged.iter().any(|(n, off)| {
            (*off - f.offset).abs() <= tol * T::lit(10.0)
                && n.iter().zip(&f.normal).all(|(a, b)| (*a - *b).abs() <= normal_tol)
        });
        if !dup {
            merged.push((f.normal.clone(), f.offset));
        }
    }
    merged
}

/// Facet vertices whose active constraint normals span the full dimension.
fn extreme_vertices<T: Real>(
    pts: &[Vec<T>],
    raw: &[Facet<T>],
    merged: &[(Vec<T>, T)],
    d: usize,
    tol: T,
) -> Vec<usize> {
    let mut candidates: Vec<usize> = raw.iter().flat_map(|f| f.verts.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let active_tol = tol * T::lit(10.0);
    candidates
        .into_iter()
        .filter(|&i| {
            let mut basis: Vec<Vec<T>> = Vec::new();
            for (n, off) in merged {
                if (dot(n, &pts[i]) - *off).abs() > active_tol {
                    continue;
                }
                let r = orthogonalize(n, &basis);
                let len = norm(&r);
                if len > T::lit(1e-9) {
                    basis.push(r.into_iter().map(|x| x / len).collect());
                    if basis.len() == d {
                        return true;
                    }
                }
            }
            false
        })
        .collect()
}
