use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rules::{check_rules, InnerRules, Violation};
use crate::clt::{ply_weight, xi_d, AngleSet, PlyCounts, PlyWeighting, StackingSequence};
use crate::error::{LamError, Result};
use crate::region::{all_sequences, cloud_size};
use crate::scalar::{dist2_4, Real, Vec4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    Exhaustive,
    BranchAndBound,
    /// Branch-and-bound hit its node budget; the result is the polished incumbent.
    LocalSearch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Largest number of sequences scanned exhaustively.
    pub exhaustive_limit: u128,
    /// Node budget of the branch-and-bound search.
    pub max_nodes: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { exhaustive_limit: 100_000, max_nodes: 5_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerResult<T> {
    pub sequence: StackingSequence,
    pub xi_d: Vec4<T>,
    /// `|target - xi_D(sequence)|^2`.
    pub residual: T,
    /// Empty when every rule holds.
    pub violations: Vec<Violation<T>>,
    pub rules_satisfied: bool,
    pub method: SearchMethod,
    /// Sequences scanned or search nodes visited.
    pub work: u64,
}

struct Problem<'a, T> {
    counts: &'a PlyCounts,
    target: &'a Vec4<T>,
    rules: &'a InnerRules<T>,
    angles: &'a AngleSet<T>,
    weighting: PlyWeighting,
}

impl<T: Real> Problem<'_, T> {
    fn check(&self) -> Result<()> {
        self.counts.check(self.angles)?;
        if self.target.iter().any(|v| !v.is_finite()) {
            return Err(LamError::Numerical("non-finite target".into()));
        }
        self.rules.validate()
    }

    fn residual(&self, seq: &StackingSequence) -> Result<(T, Vec4<T>)> {
        let xi = xi_d(seq, self.angles, self.weighting)?;
        Ok((dist2_4(self.target, &xi), xi))
    }

    fn satisfies(&self, seq: &StackingSequence) -> bool {
        check_rules(seq, self.rules, self.angles).is_empty()
    }

    fn finish(&self, seq: StackingSequence, method: SearchMethod, work: u64) -> Result<InnerResult<T>> {
        let (residual, xi) = self.residual(&seq)?;
        let violations = check_rules(&seq, self.rules, self.angles);
        Ok(InnerResult {
            rules_satisfied: violations.is_empty(),
            sequence: seq,
            xi_d: xi,
            residual,
            violations,
            method,
            work,
        })
    }
}

/// `(residual, sequence)` ordering: smaller residual, then skin-inward lexicographic.
fn better<T: Real>(res: T, seq: &StackingSequence, than: &Option<(T, StackingSequence)>) -> bool {
    match than {
        None => true,
        Some((r, s)) => res < *r || (res == *r && seq.cmp_skin_inward(s).is_lt()),
    }
}

/// Picks the retrieval path by the number of candidate sequences.
pub fn retrieve_stacking<T: Real>(
    counts: &PlyCounts,
    target: &Vec4<T>,
    rules: &InnerRules<T>,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
    opts: &SearchOptions,
) -> Result<InnerResult<T>> {
    counts.check(angles)?;
    if cloud_size(counts) <= opts.exhaustive_limit {
        retrieve_exhaustive(counts, target, rules, angles, weighting)
    } else {
        retrieve_branch_and_bound(counts, target, rules, angles, weighting, opts.max_nodes)
    }
}

/// Scans every sequence. If none satisfies the rules, the overall best is
/// returned with its violations.
pub fn retrieve_exhaustive<T: Real>(
    counts: &PlyCounts,
    target: &Vec4<T>,
    rules: &InnerRules<T>,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
) -> Result<InnerResult<T>> {
    let p = Problem { counts, target, rules, angles, weighting };
    p.check()?;
    let seqs: Vec<StackingSequence> = all_sequences(counts).collect();
    let scored: Vec<(T, bool)> = seqs
        .par_iter()
        .map(|s| p.residual(s).map(|(r, _)| (r, p.satisfies(s))))
        .collect::<Result<_>>()?;
    let mut best_ok: Option<(T, StackingSequence)> = None;
    let mut best_any: Option<(T, StackingSequence)> = None;
    for (s, (r, ok)) in seqs.iter().zip(scored) {
        if ok && better(r, s, &best_ok) {
            best_ok = Some((r, s.clone()));
        }
        if better(r, s, &best_any) {
            best_any = Some((r, s.clone()));
        }
    }
    let (_, seq) = best_ok.or(best_any).expect("at least one sequence");
    p.finish(seq, SearchMethod::Exhaustive, seqs.len() as u64)
}

struct Bnb<'a, 'p, T> {
    p: &'a Problem<'p, T>,
    enforce: bool,
    n: usize,
    /// `weights[i]` belongs to position `i + 1`.
    weights: Vec<T>,
    /// Per component, angle indices sorted by ascending signature value.
    order: [Vec<usize>; 4],
    remaining: Vec<usize>,
    /// Placed plies, skin first.
    placed: Vec<usize>,
    run: usize,
    best: Option<(T, StackingSequence)>,
    nodes: u64,
    max_nodes: u64,
    exhausted: bool,
}

impl<T: Real> Bnb<'_, '_, T> {
    /// Lower bound on the residual of any completion of the current partial
    /// stack, given its partial sums and the still unplaced plies.
    fn bound(&self, partial: &Vec4<T>, slots: usize) -> T {
        let mut total = T::zero();
        for j in 0..4 {
            let (mut lo, mut hi) = (T::zero(), T::zero());
            // Largest weights first: pair with largest values for hi, smallest for lo.
            let asc = &self.order[j];
            let (mut a_i, mut a_left) = (0, 0);
            let (mut d_i, mut d_left) = (asc.len(), 0);
            for pos in (1..=slots).rev() {
                let w = self.weights[pos - 1];
                while a_left == 0 {
                    a_left = self.remaining[asc[a_i]];
                    if a_left == 0 {
                        a_i += 1;
                    }
                }
                while d_left == 0 {
                    d_i -= 1;
                    d_left = self.remaining[asc[d_i]];
                }
                lo += w * self.p.angles.signature(asc[a_i])[j];
                hi += w * self.p.angles.signature(asc[d_i])[j];
                a_left -= 1;
                if a_left == 0 {
                    a_i += 1;
                }
                d_left -= 1;
            }
            let t = self.p.target[j];
            let (lo, hi) = (partial[j] + lo, partial[j] + hi);
            let gap = if t < lo {
                lo - t
            } else if t > hi {
                t - hi
            } else {
                T::zero()
            };
            total += gap * gap;
        }
        total
    }

    fn allowed(&self, k: usize) -> bool {
        if !self.enforce {
            return true;
        }
        let rules = self.p.rules;
        let angle = self.p.angles.angle(k);
        match self.placed.last() {
            None => rules.skin_allowed(angle),
            Some(&last) => {
                let run_ok = rules.max_contiguous == 0 || last != k || self.run < rules.max_contiguous;
                run_ok && rules.step_allowed(self.p.angles.angle(last), angle)
            }
        }
    }

    fn search(&mut self, partial: Vec4<T>) -> Result<()> {
        let depth = self.placed.len();
        if depth == self.n {
            let seq = StackingSequence::new(self.placed.iter().rev().copied().collect());
            let (r, _) = self.p.residual(&seq)?;
            if better(r, &seq, &self.best) {
                self.best = Some((r, seq));
            }
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted = true;
            return Ok(());
        }
        let pos = self.n - depth;
        let w = self.weights[pos - 1];
        let mut children: Vec<(T, usize, Vec4<T>)> = Vec::new();
        for k in 0..self.remaining.len() {
            if self.remaining[k] == 0 || !self.allowed(k) {
                continue;
            }
            let z = self.p.angles.signature(k);
            let next: Vec4<T> = std::array::from_fn(|j| partial[j] + w * z[j]);
            self.remaining[k] -= 1;
            let b = self.bound(&next, pos - 1);
            self.remaining[k] += 1;
            children.push((b, k, next));
        }
        children.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        for (b, k, next) in children {
            if let Some((best, _)) = &self.best {
                // Slack covers round-off between the bound and the leaf residual.
                let slack = T::lit(1e-12) * (T::one() + *best);
                if b - slack > *best {
                    break;
                }
            }
            let prev_run = self.run;
            self.run = if self.placed.last() == Some(&k) { self.run + 1 } else { 1 };
            self.placed.push(k);
            self.remaining[k] -= 1;
            self.search(next)?;
            self.remaining[k] += 1;
            self.placed.pop();
            self.run = prev_run;
            if self.exhausted {
                break;
            }
        }
        Ok(())
    }
}

/// Best leaf found, whether the search completed, and nodes visited.
type BnbOutcome<T> = (Option<(T, StackingSequence)>, bool, u64);

fn run_bnb<T: Real>(
    p: &Problem<'_, T>,
    enforce: bool,
    max_nodes: u64,
) -> Result<BnbOutcome<T>> {
    let n = p.counts.total();
    let weights = (1..=n).map(|i| ply_weight(i, n, p.weighting)).collect();
    let order = std::array::from_fn(|j| {
        let mut idx: Vec<usize> = (0..p.angles.len()).collect();
        idx.sort_by(|&a, &b| {
            p.angles.signature(a)[j].partial_cmp(&p.angles.signature(b)[j]).unwrap().then(a.cmp(&b))
        });
        idx
    });
    let mut bnb = Bnb {
        p,
        enforce,
        n,
        weights,
        order,
        remaining: p.counts.as_slice().to_vec(),
        placed: Vec::with_capacity(n),
        run: 0,
        best: None,
        nodes: 0,
        max_nodes,
        exhausted: false,
    };
    bnb.search([T::zero(); 4])?;
    Ok((bnb.best, !bnb.exhausted, bnb.nodes))
}

/// Depth-first branch-and-bound placing plies from the skin inward, followed
/// by a pairwise-swap polish. Exact (same answer as the exhaustive scan) when
/// the node budget is not exhausted.
pub fn retrieve_branch_and_bound<T: Real>(
    counts: &PlyCounts,
    target: &Vec4<T>,
    rules: &InnerRules<T>,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
    max_nodes: u64,
) -> Result<InnerResult<T>> {
    let p = Problem { counts, target, rules, angles, weighting };
    p.check()?;
    let (mut best, mut complete, mut nodes) = run_bnb(&p, !rules.is_empty(), max_nodes)?;
    if best.is_none() {
        // No sequence satisfies the rules (or none found in budget): best effort.
        let (b, c, extra) = run_bnb(&p, false, max_nodes)?;
        best = b;
        complete = complete && c;
        nodes += extra;
    }
    let (_, seq) = best.ok_or_else(|| LamError::Numerical("search produced no sequence".into()))?;
    let (seq, _, _) = polish(&seq, target, rules, angles, weighting)?;
    let method = if complete { SearchMethod::BranchAndBound } else { SearchMethod::LocalSearch };
    p.finish(seq, method, nodes)
}

/// First-improvement pairwise swaps until no swap lowers the residual. Rules
/// that hold on entry are kept. Returns the sequence, its residual and the
/// number of accepted swaps.
pub fn polish<T: Real>(
    seq: &StackingSequence,
    target: &Vec4<T>,
    rules: &InnerRules<T>,
    angles: &AngleSet<T>,
    weighting: PlyWeighting,
) -> Result<(StackingSequence, T, usize)> {
    let counts = seq.counts(angles.len());
    let p = Problem { counts: &counts, target, rules, angles, weighting };
    let enforce = p.satisfies(seq);
    let mut plies = seq.plies().to_vec();
    let (mut current, _) = p.residual(seq)?;
    let mut swaps = 0;
    loop {
        let mut improved = false;
        for i in 0..plies.len() {
            for j in i + 1..plies.len() {
                if plies[i] == plies[j] {
                    continue;
                }
                plies.swap(i, j);
                let cand = StackingSequence::new(plies.clone());
                let (r, _) = p.residual(&cand)?;
                if r < current && (!enforce || p.satisfies(&cand)) {
                    debug_assert!(r < current);
                    current = r;
                    swaps += 1;
                    improved = true;
                } else {
                    plies.swap(i, j);
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok((StackingSequence::new(plies), current, swaps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::extreme_sequences;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quad() -> AngleSet<f64> {
        AngleSet::new(&[0.0, 45.0, -45.0, 90.0]).unwrap()
    }

    #[test]
    fn vertex_target_is_recovered_exactly() {
        let counts = PlyCounts::new(vec![2, 1, 2, 1]);
        let ext = extreme_sequences(&counts, &quad(), PlyWeighting::Midpoint).unwrap();
        for (seq, pt) in ext.distinct.iter().zip(&ext.points) {
            let r = retrieve_exhaustive(&counts, pt, &InnerRules::none(), &quad(), PlyWeighting::Midpoint).unwrap();
            assert_eq!(r.residual, 0.0);
            assert_eq!(&r.sequence, seq);
            assert!(r.rules_satisfied);
        }
    }

    #[test]
    fn two_candidate_midpoint_tie() {
        let angles = AngleSet::new(&[0.0, 90.0]).unwrap();
        let counts = PlyCounts::new(vec![1, 1]);
        let target = [0.0, 0.9375, 0.0, 0.0];
        let r = retrieve_exhaustive(&counts, &target, &InnerRules::none(), &angles, PlyWeighting::Midpoint).unwrap();
        // Equidistant: [90, 0] reads [0, 90] from the skin, which sorts first.
        assert_eq!(r.sequence.plies(), &[1, 0]);
        let r = retrieve_exhaustive(&counts, &[0.1, 0.9375, 0.0, 0.0], &InnerRules::none(), &angles, PlyWeighting::Midpoint)
            .unwrap();
        assert_eq!(r.sequence.plies(), &[1, 0]);
        let r = retrieve_exhaustive(&counts, &[-0.1, 0.9375, 0.0, 0.0], &InnerRules::none(), &angles, PlyWeighting::Midpoint)
            .unwrap();
        assert_eq!(r.sequence.plies(), &[0, 1]);
    }

    #[test]
    fn infeasible_rules_are_flagged() {
        let counts = PlyCounts::new(vec![3, 0, 0, 0]);
        let rules = InnerRules { max_contiguous: 2, ..InnerRules::none() };
        let r = retrieve_exhaustive(&counts, &[0.0; 4], &rules, &quad(), PlyWeighting::Midpoint).unwrap();
        assert!(!r.rules_satisfied);
        assert_eq!(r.violations.len(), 1);
        let b = retrieve_branch_and_bound(&counts, &[0.0; 4], &rules, &quad(), PlyWeighting::Midpoint, 1_000_000).unwrap();
        assert_eq!(b.sequence, r.sequence);
        assert!(!b.rules_satisfied);
    }

    #[test]
    fn branch_and_bound_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let rule_sets = [
            InnerRules::none(),
            InnerRules { max_contiguous: 2, outer_ply_angles: vec![45.0, -45.0], max_disorientation: 45.0 },
            InnerRules { max_contiguous: 1, ..InnerRules::none() },
        ];
        for counts in [vec![2, 1, 1, 0], vec![2, 2, 1, 1], vec![3, 1, 2, 1]] {
            let counts = PlyCounts::new(counts);
            for rules in &rule_sets {
                for mode in [PlyWeighting::Midpoint, PlyWeighting::Exact] {
                    let target: [f64; 4] = std::array::from_fn(|_| rng.random_range(-0.8..0.8));
                    let e = retrieve_exhaustive(&counts, &target, rules, &quad(), mode).unwrap();
                    let b = retrieve_branch_and_bound(&counts, &target, rules, &quad(), mode, 10_000_000).unwrap();
                    assert_eq!(b.method, SearchMethod::BranchAndBound);
                    assert_eq!(e.residual, b.residual);
                    assert_eq!(e.sequence, b.sequence);
                    assert_eq!(e.rules_satisfied, b.rules_satisfied);
                }
            }
        }
    }

    #[test]
    fn tiny_node_budget_falls_back_to_local_search() {
        let counts = PlyCounts::new(vec![3, 3, 3, 3]);
        let target = [0.1, -0.2, 0.05, 0.0];
        let r = retrieve_branch_and_bound(&counts, &target, &InnerRules::none(), &quad(), PlyWeighting::Midpoint, 20).unwrap();
        assert_eq!(r.method, SearchMethod::LocalSearch);
        assert_eq!(r.sequence.counts(4), counts);
    }

    #[test]
    fn polish_never_increases_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let mut plies: Vec<usize> = (0..10).map(|_| rng.random_range(0..4)).collect();
            plies.sort();
            let seq = StackingSequence::new(plies);
            let target: [f64; 4] = std::array::from_fn(|_| rng.random_range(-0.5..0.5));
            let before = dist2_4(&target, &xi_d(&seq, &quad(), PlyWeighting::Exact).unwrap());
            let (out, after, _) = polish(&seq, &target, &InnerRules::none(), &quad(), PlyWeighting::Exact).unwrap();
            assert!(after <= before);
            assert_eq!(out.counts(4), seq.counts(4));
        }
    }

    #[test]
    fn dispatch_uses_branch_and_bound_beyond_limit() {
        let counts = PlyCounts::new(vec![2, 2, 1, 1]);
        let opts = SearchOptions { exhaustive_limit: 10, ..SearchOptions::default() };
        let r = retrieve_stacking(&counts, &[0.0; 4], &InnerRules::none(), &quad(), PlyWeighting::Midpoint, &opts).unwrap();
        assert_eq!(r.method, SearchMethod::BranchAndBound);
        let r = retrieve_stacking(&counts, &[0.0; 4], &InnerRules::none(), &quad(), PlyWeighting::Midpoint, &SearchOptions::default())
            .unwrap();
        assert_eq!(r.method, SearchMethod::Exhaustive);
    }
}
