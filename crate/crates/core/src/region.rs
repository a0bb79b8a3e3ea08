//! Feasible region of bending lamination parameters at fixed ply counts.
//!
//! For fixed counts the set of realizable `xi_D` is the convex hull of the
//! "extreme" sequences, in which plies of each angle form one contiguous
//! block. For any direction `lambda`, `lambda . xi_D` is a sum of per-ply
//! scores times strictly increasing through-thickness weights, so sorting the
//! plies by score (best at the skin) maximizes it; that ordering is always
//! block-contiguous. The brute-force helpers here check this against every
//! stacking sequence at small sizes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clt::{xi_d, AngleSet, PlyCounts, PlyWeighting, StackingSequence};
use crate::error::{LamError, Result};
use crate::geometry::{convex_hull_with, FeasiblePolytope, HullOptions};
use crate::perm::{multinomial, next_permutation};
use crate::scalar::{dot4, Real, Vec4};

/// Upper bound on the number of sequences the brute-force cloud will enumerate.
pub const CLOUD_GUARD: u128 = 1_000_000;

/// Block-contiguous stacking sequences for every order of the angle blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeSequenceSet<T> {
    /// Block order (first entry = outermost block) and the sequence it yields,
    /// for all `N_theta!` orders.
    pub by_permutation: Vec<(Vec<usize>, StackingSequence)>,
    /// Distinct sequences, sorted mid-plane to skin lexicographically.
    pub distinct: Vec<StackingSequence>,
    /// `xi_D` of each distinct sequence.
    pub points: Vec<Vec4<T>>,
}

impl<T: Real> ExtremeSequenceSet<T> {
    /// A sequence whose `xi_D` is exactly `point`.
    pub fn sequence_of(&self, point: &Vec4<T>) -> Option<&StackingSequence> {
        self.points.iter().position(|p| p == point).map(|i| &self.distinct[i])
    }
}

/// Builds the sequence whose outermost `counts[order[0]]` plies are
/// `order[0]`, the next block `order[1]`, and so on toward the mid-plane.
fn block_sequence(counts: &PlyCounts, order: &[usize]) -> StackingSequence {
    let mut plies = Vec::with_capacity(counts.total());
    for &k in order.iter().rev() {
        plies.extend(std::iter::repeat_n(k, counts.get(k)));
    }
    StackingSequence::new(plies)
}

pub fn extreme_sequences<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
) -> Result<ExtremeSequenceSet<T>> {
    counts.check(angles)?;
    let mut order: Vec<usize> = (0..angles.len()).collect();
    let mut by_permutation = Vec::new();
    loop {
        by_permutation.push((order.clone(), block_sequence(counts, &order)));
        if !next_permutation(&mut order) {
            break;
        }
    }
    let mut distinct: Vec<StackingSequence> = by_permutation.iter().map(|(_, s)| s.clone()).collect();
    distinct.sort();
    distinct.dedup();
    let points = distinct
        .iter()
        .map(|s| xi_d(s, angles, weighting))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtremeSequenceSet { by_permutation, distinct, points })
}

/// The exact feasible region of `xi_D` for the given counts.
pub fn feasible_region<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
) -> Result<FeasiblePolytope<T>> {
    feasible_region_with(counts, angles, weighting, &HullOptions::default())
}

pub fn feasible_region_with<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
    opts: &HullOptions<T>,
) -> Result<FeasiblePolytope<T>> {
    let ext = extreme_sequences(counts, angles, weighting)?;
    convex_hull_with(&ext.points, opts)
}

/// Maximum of `lambda . xi_D` over the counts and a sequence attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Support<T> {
    pub value: T,
    pub sequence: StackingSequence,
}

/// Support function of the feasible region. Ties go to the sequence that is
/// lexicographically smallest when read from the skin inward.
pub fn support_max<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    lambda: &Vec4<T>,
    weighting: PlyWeighting,
) -> Result<Support<T>> {
    let ext = extreme_sequences(counts, angles, weighting)?;
    Ok(best_by_direction(ext.distinct.iter().zip(&ext.points), lambda))
}

fn best_by_direction<'a, T: Real + 'a>(
    candidates: impl Iterator<Item = (&'a StackingSequence, &'a Vec4<T>)>,
    lambda: &Vec4<T>,
) -> Support<T> {
    let mut best: Option<(T, &StackingSequence)> = None;
    for (seq, p) in candidates {
        let v = dot4(lambda, p);
        let better = match best {
            None => true,
            Some((bv, bs)) => v > bv || (v == bv && seq.cmp_skin_inward(bs).is_lt()),
        };
        if better {
            best = Some((v, seq));
        }
    }
    let (value, seq) = best.expect("at least one candidate");
    Support { value, sequence: seq.clone() }
}

/// Number of distinct stacking sequences with the given counts.
pub fn cloud_size(counts: &PlyCounts) -> u128 {
    multinomial(counts.as_slice())
}

/// Every distinct stacking sequence for `counts`, in lexicographic order
/// (mid-plane to skin).
pub fn all_sequences(counts: &PlyCounts) -> impl Iterator<Item = StackingSequence> {
    let mut plies: Vec<usize> = Vec::with_capacity(counts.total());
    for (k, &n) in counts.as_slice().iter().enumerate() {
        plies.extend(std::iter::repeat_n(k, n));
    }
    let mut done = plies.is_empty();
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = StackingSequence::new(plies.clone());
        done = !next_permutation(&mut plies);
        Some(current)
    })
}

/// Every stacking sequence with its `xi_D`, sorted mid-plane to skin.
pub fn brute_force_cloud<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
) -> Result<Vec<(StackingSequence, Vec4<T>)>> {
    brute_force_cloud_limited(counts, angles, weighting, CLOUD_GUARD)
}

pub fn brute_force_cloud_limited<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
    limit: u128,
) -> Result<Vec<(StackingSequence, Vec4<T>)>> {
    counts.check(angles)?;
    let count = cloud_size(counts);
    if count > limit {
        return Err(LamError::TooManySequences { count, limit });
    }
    let seqs: Vec<StackingSequence> = all_sequences(counts).collect();
    seqs.into_par_iter()
        .map(|s| xi_d(&s, angles, weighting).map(|p| (s, p)))
        .collect()
}

/// `n` unit directions in 4-space drawn from a seeded Gaussian.
pub fn random_directions<T: Real>(n: usize, seed: u64) -> Vec<Vec4<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let g: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let len = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            g.map(|v| T::lit(v / len))
        })
        .collect()
}

/// Outcome of checking the hull and support properties against brute force.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport<T> {
    pub counts: PlyCounts,
    pub weighting: PlyWeighting,
    pub tol: T,
    pub cloud_size: usize,
    pub vertices: usize,
    pub affine_dim: usize,
    /// Largest constraint violation of any sequence point (non-positive when inside).
    pub hull_max_violation: T,
    pub points_outside: usize,
    pub directions: usize,
    /// Largest `|brute-force max - support_max|` over the directions.
    pub support_max_gap: T,
    pub support_failures: usize,
    /// Directions whose support maximizer is not block-contiguous.
    pub non_block_maximizers: usize,
    pub passed: bool,
}

pub fn verify_region<T: Real>(
    counts: &PlyCounts,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
    samples: usize,
    seed: u64,
    tol: T,
) -> Result<VerificationReport<T>> {
    let cloud = brute_force_cloud(counts, angles, weighting)?;
    let ext = extreme_sequences(counts, angles, weighting)?;
    let poly = convex_hull_with(&ext.points, &HullOptions::default())?;

    let violations: Vec<T> = cloud.par_iter().map(|(_, p)| poly.violation(p)).collect();
    let hull_max_violation = violations.iter().copied().fold(T::neg_infinity(), T::max);
    let points_outside = violations.iter().filter(|&&v| v > tol).count();

    let dirs = random_directions::<T>(samples, seed);
    let per_dir: Vec<(T, bool)> = dirs
        .par_iter()
        .map(|lambda| {
            let support = best_by_direction(ext.distinct.iter().zip(&ext.points), lambda);
            let brute = cloud
                .iter()
                .map(|(_, p)| dot4(lambda, p))
                .fold(T::neg_infinity(), T::max);
            ((brute - support.value).abs(), support.sequence.is_block_contiguous())
        })
        .collect();
    let support_max_gap = per_dir.iter().map(|(g, _)| *g).fold(T::zero(), T::max);
    let support_failures = per_dir.iter().filter(|(g, _)| *g > tol).count();
    let non_block_maximizers = per_dir.iter().filter(|(_, b)| !b).count();

    Ok(VerificationReport {
        counts: counts.clone(),
        weighting,
        tol,
        cloud_size: cloud.len(),
        vertices: poly.vertices.len(),
        affine_dim: poly.affine_dim,
        hull_max_violation,
        points_outside,
        directions: samples,
        support_max_gap,
        support_failures,
        non_block_maximizers,
        passed: points_outside == 0 && support_failures == 0 && non_block_maximizers == 0,
    })
}
