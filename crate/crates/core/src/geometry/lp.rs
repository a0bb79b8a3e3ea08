//! Dense two-phase simplex for small linear programs.
//!
//! Problems are `maximize c.x` subject to `A x <= b`, `C x = d`, with each
//! variable either free or non-negative. Pivoting follows Bland's rule, so the
//! method terminates and is deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{LamError, Result};
use crate::scalar::{Real, Vec4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub x: Option<Vec<T>>,
    pub value: Option<T>,
}

impl<T> LpSolution<T> {
    fn without_point(status: LpStatus) -> Self {
        Self { status, x: None, value: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    ineq: Vec<(Vec<T>, T)>,
    eq: Vec<(Vec<T>, T)>,
    nonneg: Vec<bool>,
}

impl<T: Real> LinearProgram<T> {
    /// A program maximizing `objective . x` over free variables.
    pub fn maximize(objective: Vec<T>) -> Self {
        let n = objective.len();
        Self { objective, ineq: vec![], eq: vec![], nonneg: vec![false; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `row . x <= rhs`.
    pub fn add_le(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.ineq.push((row, rhs));
        self
    }

    /// Adds `row . x == rhs`.
    pub fn add_eq(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.eq.push((row, rhs));
        self
    }

    pub fn nonnegative(&mut self, var: usize) -> &mut Self {
        self.nonneg[var] = true;
        self
    }

    pub fn solve(&self) -> Result<LpSolution<T>> {
        let n = self.num_vars();
        for (row, rhs) in self.ineq.iter().chain(&self.eq) {
            if row.len() != n {
                return Err(LamError::DimensionMismatch { expected: n, found: row.len() });
            }
            if !rhs.is_finite() || row.iter().any(|v| !v.is_finite()) {
                return Err(LamError::Numerical("non-finite LP data".into()));
            }
        }
        Tableau::build(self).run(self)
    }
}

/// Solves `max c.x  s.t. A x <= b, C x = d` over free variables.
pub fn solve_lp<T: Real>(
    objective: &[T],
    ineq: (&[Vec<T>], &[T]),
    eq: (&[Vec<T>], &[T]),
) -> Result<LpSolution<T>> {
    if ineq.0.len() != ineq.1.len() {
        return Err(LamError::DimensionMismatch { expected: ineq.0.len(), found: ineq.1.len() });
    }
    if eq.0.len() != eq.1.len() {
        return Err(LamError::DimensionMismatch { expected: eq.0.len(), found: eq.1.len() });
    }
    let mut lp = LinearProgram::maximize(objective.to_vec());
    for (row, &b) in ineq.0.iter().zip(ineq.1) {
        lp.add_le(row.clone(), b);
    }
    for (row, &d) in eq.0.iter().zip(eq.1) {
        lp.add_eq(row.clone(), d);
    }
    lp.solve()
}

/// Whether `point` lies within L1 distance `tol` of the convex hull of `others`.
pub fn in_convex_hull<T: Real>(point: &Vec4<T>, others: &[Vec4<T>], tol: T) -> Result<bool> {
    if others.is_empty() {
        return Ok(false);
    }
    // Variables: weights (one per point), then e+ and e- per coordinate.
    let m = others.len();
    let n = m + 8;
    let mut objective = vec![T::zero(); n];
    objective[m..].iter_mut().for_each(|c| *c = -T::one());
    let mut lp = LinearProgram::maximize(objective);
    for j in 0..n {
        lp.nonnegative(j);
    }
    for coord in 0..4 {
        let mut row: Vec<T> = others.iter().map(|p| p[coord]).collect();
        row.resize(n, T::zero());
        row[m + coord] = T::one();
        row[m + 4 + coord] = -T::one();
        lp.add_eq(row, point[coord]);
    }
    let mut row = vec![T::one(); m];
    row.resize(n, T::zero());
    lp.add_eq(row, T::one());
    let sol = lp.solve()?;
    match (sol.status, sol.value) {
        (LpStatus::Optimal, Some(v)) => Ok(-v <= tol),
        _ => Err(LamError::Numerical("hull membership LP failed".into())),
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    ncols: usize,
    /// `(positive column, negative column)` per original variable.
    var_cols: Vec<(usize, Option<usize>)>,
    first_artificial: usize,
}

impl<T: Real> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut col = 0;
        for &nn in &lp.nonneg {
            if nn {
                var_cols.push((col, None));
                col += 1;
            } else {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            }
        }
        let first_slack = col;
        let n_slack = lp.ineq.len();
        let first_artificial = first_slack + n_slack;
        let needs_art: usize = lp.ineq.iter().filter(|(_, b)| *b < T::zero()).count() + lp.eq.len();
        let ncols = first_artificial + needs_art;

        let mut rows = Vec::new();
        let mut basis = Vec::new();
        let mut next_art = first_artificial;
        let expand = |src: &[T], row: &mut Vec<T>| {
            for (j, &(p, neg)) in var_cols.iter().enumerate() {
                row[p] = src[j];
                if let Some(q) = neg {
                    row[q] = -src[j];
                }
            }
        };
        for (i, (a, b)) in lp.ineq.iter().enumerate() {
            let mut row = vec![T::zero(); ncols + 1];
            expand(a, &mut row);
            row[first_slack + i] = T::one();
            row[ncols] = *b;
            if *b < T::zero() {
                row.iter_mut().for_each(|v| *v = -*v);
                row[next_art] = T::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(first_slack + i);
            }
            rows.push(row);
        }
        for (c, d) in &lp.eq {
            let mut row = vec![T::zero(); ncols + 1];
            expand(c, &mut row);
            row[ncols] = *d;
            if *d < T::zero() {
                row.iter_mut().for_each(|v| *v = -*v);
            }
            row[next_art] = T::one();
            basis.push(next_art);
            next_art += 1;
            rows.push(row);
        }
        Self { rows, basis, ncols, var_cols, first_artificial }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != T::zero() {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * *pv;
                }
                row[c] = T::zero();
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over columns `< col_limit`. Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[T], col_limit: usize) -> Result<bool> {
        let eps = T::lit(T::PIVOT_TOL);
        let max_iter = 200 * (self.rows.len() + self.ncols) + 1000;
        for _ in 0..max_iter {
            let mut entering = None;
            for j in 0..col_limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j];
                for (i, &b) in self.basis.iter().enumerate() {
                    reduced -= cost[b] * self.rows[i][j];
                }
                if reduced > eps {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > eps {
                    let ratio = row[self.ncols] / row[c];
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= eps * (T::one() + lr.abs());
                            if ratio < lr && !tie || tie && self.basis[i] < self.basis[li] {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c),
            }
        }
        Err(LamError::Numerical("simplex iteration limit reached".into()))
    }

    fn run(mut self, lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
        let eps = T::lit(T::PIVOT_TOL);
        if self.first_artificial < self.ncols {
            let mut cost = vec![T::zero(); self.ncols];
            cost[self.first_artificial..].iter_mut().for_each(|c| *c = -T::one());
            self.optimize(&cost, self.ncols)?;
            let infeasibility: T = self
                .basis
                .iter()
                .zip(&self.rows)
                .filter(|(&b, _)| b >= self.first_artificial)
                .map(|(_, row)| row[self.ncols])
                .sum();
            let scale = self.rows.iter().fold(T::one(), |acc, r| acc.max(r[self.ncols].abs()));
            if infeasibility > T::lit(T::HULL_TOL) * scale {
                return Ok(LpSolution::without_point(LpStatus::Infeasible));
            }
            // Drive remaining artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    let col = (0..self.first_artificial).find(|&j| self.rows[i][j].abs() > eps);
                    match col {
                        Some(j) => self.pivot(i, j),
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![T::zero(); self.ncols];
        for (j, &(p, neg)) in self.var_cols.iter().enumerate() {
            cost[p] = lp.objective[j];
            if let Some(q) = neg {
                cost[q] = -lp.objective[j];
            }
        }
        if !self.optimize(&cost, self.first_artificial)? {
            return Ok(LpSolution::without_point(LpStatus::Unbounded));
        }
        let mut col_val = vec![T::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_val[b] = self.rows[i][self.ncols];
        }
        let x: Vec<T> = self
            .var_cols
            .iter()
            .map(|&(p, neg)| col_val[p] - neg.map_or(T::zero(), |q| col_val[q]))
            .collect();
        let value = x.iter().zip(&lp.objective).fold(T::zero(), |acc, (a, c)| acc + *a * *c);
        Ok(LpSolution { status: LpStatus::Optimal, x: Some(x), value: Some(value) })
    }
}
