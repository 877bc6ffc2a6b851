//! Continuous relaxation of the max-min placement program.
//!
//! ```text
//! maximize    t - w'x + eps * 1'Ax
//! subject to  t <= (Ax)_j        for every route point j
//!             0 <= x <= 1
//!             1'x = S
//! ```
//!
//! Solved with a dense bounded-variable revised simplex. The program has only
//! `m + 1` rows (one per route point plus the cardinality row), so the basis
//! inverse stays small even with thousands of candidate columns, and the
//! answer is always a basic (vertex) solution.
//!
//! Variable layout: `x_0..x_{n-1}`, then `t`, then one slack per route-point
//! row, then an artificial variable fixed at zero on the cardinality row.
//! Starting with `S` of the `x` at their upper bound, `t = 0` and the slacks
//! basic gives a feasible basis without a phase one.

use crate::coverage::CoverageMatrix;
use crate::error::{Error, Result};

/// Entries above this are treated as a modelling error.
pub const MAX_COEFFICIENT: f64 = 1e12;

const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 25;
const REFACTOR_EVERY: usize = 64;

#[derive(Debug, Clone)]
pub struct RelaxedProblem<'a> {
    pub coverage: &'a CoverageMatrix,
    pub team_size: usize,
    /// Per-candidate penalty `w`; empty means all zeros.
    pub weights: Vec<f64>,
    /// Weight of the secondary total-coverage term `1'Ax`.
    pub tiebreak_eps: f64,
}

impl<'a> RelaxedProblem<'a> {
    pub fn new(coverage: &'a CoverageMatrix, team_size: usize) -> Self {
        Self {
            coverage,
            team_size,
            weights: Vec::new(),
            tiebreak_eps: 0.0,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_tiebreak(mut self, eps: f64) -> Self {
        self.tiebreak_eps = eps;
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.coverage.cols();
        if self.team_size == 0 {
            return Err(Error::invalid("team_size", "must be at least 1"));
        }
        if !self.weights.is_empty() && self.weights.len() != n {
            return Err(Error::invalid(
                "weights",
                format!("has {} entries, expected {n}", self.weights.len()),
            ));
        }
        if let Some(i) = self
            .weights
            .iter()
            .position(|w| !(w.is_finite() && *w >= 0.0))
        {
            return Err(Error::invalid(
                format!("weights[{i}]"),
                "must be finite and nonnegative",
            ));
        }
        if !(self.tiebreak_eps.is_finite() && self.tiebreak_eps >= 0.0) {
            return Err(Error::invalid(
                "tiebreak_eps",
                "must be finite and nonnegative",
            ));
        }
        let max = self.coverage.max_entry();
        if max > MAX_COEFFICIENT {
            return Err(Error::invalid(
                "coverage",
                format!("entry {max:e} exceeds {MAX_COEFFICIENT:e}"),
            ));
        }
        Ok(())
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.get(i).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// Only reachable with a matrix that has no rows, where `t` is unconstrained.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub x: Vec<f64>,
    pub t: f64,
    /// Full objective `t - w'x + eps * 1'Ax` at `x`.
    pub objective: f64,
    /// Objective of the dual solution read off the final basis.
    pub dual_objective: f64,
    pub status: SolveStatus,
    pub pivots: usize,
}

impl RelaxedSolution {
    fn without_solution(status: SolveStatus) -> Self {
        Self {
            x: Vec::new(),
            t: f64::NAN,
            objective: f64::NAN,
            dual_objective: f64::NAN,
            status,
            pivots: 0,
        }
    }
}

/// Solves the relaxation to a vertex optimum.
pub fn solve_relaxation(problem: &RelaxedProblem) -> Result<RelaxedSolution> {
    problem.validate()?;
    let a = problem.coverage;
    if problem.team_size > a.cols() {
        return Ok(RelaxedSolution::without_solution(SolveStatus::Infeasible));
    }
    if a.rows() == 0 {
        return Ok(RelaxedSolution::without_solution(SolveStatus::Unbounded));
    }
    Simplex::new(problem).run()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pricing {
    Dantzig,
    Bland,
}

struct Simplex<'p, 'a> {
    problem: &'p RelaxedProblem<'a>,
    m: usize,
    n: usize,
    /// Objective coefficients for every variable.
    cost: Vec<f64>,
    upper: Vec<f64>,
    value: Vec<f64>,
    at_upper: Vec<bool>,
    /// Row holding each basic variable.
    basic_row: Vec<Option<usize>>,
    basis: Vec<usize>,
    /// Row-major inverse of the basis matrix, `(m+1) x (m+1)`.
    binv: Vec<f64>,
    pivots: usize,
}

impl<'p, 'a> Simplex<'p, 'a> {
    fn new(problem: &'p RelaxedProblem<'a>) -> Self {
        let a = problem.coverage;
        let (m, n) = (a.rows(), a.cols());
        let s = problem.team_size;
        let total = n + 1 + m + 1;
        let r = m + 1;

        let mut cost = vec![0.0; total];
        for (i, c) in cost.iter_mut().enumerate().take(n) {
            let colsum: f64 = a.column(i).iter().sum();
            *c = problem.tiebreak_eps * colsum - problem.weight(i);
        }
        cost[n] = 1.0;

        let mut upper = vec![f64::INFINITY; total];
        upper[..n].fill(1.0);
        upper[total - 1] = 0.0;

        // start from the S most attractive columns (ties to the lower index)
        let mut order: Vec<usize> = (0..n).collect();
        let score = |i: usize| a.column(i).iter().sum::<f64>() - problem.weight(i);
        order.sort_by(|&i, &j| score(j).total_cmp(&score(i)).then(i.cmp(&j)));
        let mut value = vec![0.0; total];
        let mut at_upper = vec![false; total];
        for &i in &order[..s] {
            value[i] = 1.0;
            at_upper[i] = true;
        }

        let basis: Vec<usize> = (n + 1..total).collect();
        let mut basic_row = vec![None; total];
        for (row, &var) in basis.iter().enumerate() {
            basic_row[var] = Some(row);
        }
        let mut binv = vec![0.0; r * r];
        for i in 0..r {
            binv[i * r + i] = 1.0;
        }

        let mut simplex = Self {
            problem,
            m,
            n,
            cost,
            upper,
            value,
            at_upper,
            basic_row,
            basis,
            binv,
            pivots: 0,
        };
        simplex.recompute_basic_values();
        simplex
    }

    fn rows(&self) -> usize {
        self.m + 1
    }

    /// Writes column `var` of the constraint matrix into `out`.
    fn column(&self, var: usize, out: &mut [f64]) {
        out.fill(0.0);
        let (m, n) = (self.m, self.n);
        if var < n {
            for (o, a) in out.iter_mut().zip(self.problem.coverage.column(var)) {
                *o = -a;
            }
            out[m] = 1.0;
        } else if var == n {
            out[..m].fill(1.0);
        } else {
            out[var - n - 1] = 1.0;
        }
    }

    fn rhs(&self) -> Vec<f64> {
        let mut b = vec![0.0; self.rows()];
        b[self.m] = self.problem.team_size as f64;
        b
    }

    /// `y' = c_B' B^-1`.
    fn duals(&self) -> Vec<f64> {
        let r = self.rows();
        let mut y = vec![0.0; r];
        for (i, &var) in self.basis.iter().enumerate() {
            let c = self.cost[var];
            if c != 0.0 {
                for (yk, bk) in y.iter_mut().zip(&self.binv[i * r..(i + 1) * r]) {
                    *yk += c * bk;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, var: usize, y: &[f64]) -> f64 {
        let (m, n) = (self.m, self.n);
        let ya = if var < n {
            y[m] - self
                .problem
                .coverage
                .column(var)
                .iter()
                .zip(y)
                .map(|(a, yj)| a * yj)
                .sum::<f64>()
        } else if var == n {
            y[..m].iter().sum()
        } else {
            y[var - n - 1]
        };
        self.cost[var] - ya
    }

    /// Picks an entering variable and its direction (+1 increase, -1 decrease).
    fn price(&self, y: &[f64], rule: Pricing) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for var in 0..self.cost.len() {
            if self.basic_row[var].is_some() || self.upper[var] == 0.0 {
                continue;
            }
            let d = self.reduced_cost(var, y);
            let dir = if self.at_upper[var] {
                if d < -DUAL_TOL {
                    -1.0
                } else {
                    continue;
                }
            } else if d > DUAL_TOL {
                1.0
            } else {
                continue;
            };
            match rule {
                Pricing::Bland => return Some((var, dir)),
                Pricing::Dantzig => {
                    if best.is_none_or(|(_, _, mag)| d.abs() > mag) {
                        best = Some((var, dir, d.abs()));
                    }
                }
            }
        }
        best.map(|(var, dir, _)| (var, dir))
    }

    fn run(mut self) -> Result<RelaxedSolution> {
        let r = self.rows();
        let max_pivots = 50_000 + 50 * (self.n + r);
        let mut alpha = vec![0.0; r];
        let mut column = vec![0.0; r];
        let mut rule = Pricing::Dantzig;
        let mut stalled = 0;
        let mut since_refactor = 0;

        loop {
            let y = self.duals();
            let Some((q, dir)) = self.price(&y, rule) else {
                return Ok(self.finish(&y));
            };
            if self.pivots >= max_pivots {
                return Err(Error::Solver(format!(
                    "no optimum after {max_pivots} pivots"
                )));
            }

            self.column(q, &mut column);
            for (i, a) in alpha.iter_mut().enumerate() {
                *a = self.binv[i * r..(i + 1) * r]
                    .iter()
                    .zip(&column)
                    .map(|(b, c)| b * c)
                    .sum();
            }

            // ratio test; basic values move by -theta * dir * alpha
            let mut step = self.upper[q];
            let mut leave: Option<(usize, bool)> = None;
            let mut leave_mag = 0.0;
            for i in 0..r {
                let delta = dir * alpha[i];
                let var = self.basis[i];
                let (ratio, to_upper) = if delta > PIVOT_TOL {
                    (((self.value[var]) / delta).max(0.0), false)
                } else if delta < -PIVOT_TOL && self.upper[var].is_finite() {
                    (
                        ((self.upper[var] - self.value[var]) / -delta).max(0.0),
                        true,
                    )
                } else {
                    continue;
                };
                let better = match leave {
                    _ if ratio < step => true,
                    Some((row, _)) if ratio == step => match rule {
                        Pricing::Bland => var < self.basis[row],
                        Pricing::Dantzig => delta.abs() > leave_mag,
                    },
                    _ => false,
                };
                if better {
                    step = ratio;
                    leave = Some((i, to_upper));
                    leave_mag = delta.abs();
                }
            }
            if step.is_infinite() {
                return Ok(RelaxedSolution {
                    pivots: self.pivots,
                    ..RelaxedSolution::without_solution(SolveStatus::Unbounded)
                });
            }

            self.pivots += 1;
            if step <= DEGENERATE_STEP {
                stalled += 1;
                if stalled > STALL_LIMIT {
                    rule = Pricing::Bland;
                }
            } else {
                stalled = 0;
                rule = Pricing::Dantzig;
            }

            self.value[q] += dir * step;
            for i in 0..r {
                let var = self.basis[i];
                self.value[var] -= step * dir * alpha[i];
            }

            match leave {
                None => {
                    // bound flip, basis unchanged
                    self.at_upper[q] = !self.at_upper[q];
                    self.value[q] = if self.at_upper[q] { self.upper[q] } else { 0.0 };
                }
                Some((p, to_upper)) => {
                    let out = self.basis[p];
                    self.value[out] = if to_upper { self.upper[out] } else { 0.0 };
                    self.at_upper[out] = to_upper;
                    self.basic_row[out] = None;
                    self.basis[p] = q;
                    self.basic_row[q] = Some(p);
                    self.at_upper[q] = false;
                    self.pivot_inverse(p, &alpha);
                    since_refactor += 1;
                    if since_refactor >= REFACTOR_EVERY {
                        self.refactor()?;
                        since_refactor = 0;
                    }
                }
            }
        }
    }

    /// Product-form update of `B^-1` after column `alpha` enters at row `p`.
    fn pivot_inverse(&mut self, p: usize, alpha: &[f64]) {
        let r = self.rows();
        let piv = alpha[p];
        for k in 0..r {
            self.binv[p * r + k] /= piv;
        }
        let (before, rest) = self.binv.split_at_mut(p * r);
        let (prow, after) = rest.split_at_mut(r);
        for (i, row) in before
            .chunks_exact_mut(r)
            .chain(after.chunks_exact_mut(r))
            .enumerate()
        {
            let coef = alpha[if i < p { i } else { i + 1 }];
            if coef != 0.0 {
                for (x, pv) in row.iter_mut().zip(prow.iter()) {
                    *x -= coef * pv;
                }
            }
        }
    }

    /// Rebuilds `B^-1` by Gauss-Jordan elimination and recomputes basic values.
    fn refactor(&mut self) -> Result<()> {
        let r = self.rows();
        let mut b = vec![0.0; r * r];
        let mut col = vec![0.0; r];
        for (j, &var) in self.basis.iter().enumerate() {
            self.column(var, &mut col);
            for i in 0..r {
                b[i * r + j] = col[i];
            }
        }
        let mut inv = vec![0.0; r * r];
        for i in 0..r {
            inv[i * r + i] = 1.0;
        }
        for c in 0..r {
            let p = (c..r)
                .max_by(|&i, &j| b[i * r + c].abs().total_cmp(&b[j * r + c].abs()))
                .expect("nonempty range");
            if b[p * r + c].abs() < 1e-14 {
                return Err(Error::Solver(
                    "singular basis during refactorization".into(),
                ));
            }
            if p != c {
                for k in 0..r {
                    b.swap(p * r + k, c * r + k);
                    inv.swap(p * r + k, c * r + k);
                }
            }
            let d = b[c * r + c];
            for k in 0..r {
                b[c * r + k] /= d;
                inv[c * r + k] /= d;
            }
            for i in 0..r {
                if i != c {
                    let f = b[i * r + c];
                    if f != 0.0 {
                        for k in 0..r {
                            b[i * r + k] -= f * b[c * r + k];
                            inv[i * r + k] -= f * inv[c * r + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.recompute_basic_values();
        Ok(())
    }

    /// `x_B = B^-1 (b - N x_N)`.
    fn recompute_basic_values(&mut self) {
        let r = self.rows();
        let mut resid = self.rhs();
        let mut col = vec![0.0; r];
        for var in 0..self.cost.len() {
            if self.basic_row[var].is_none() && self.value[var] != 0.0 {
                self.column(var, &mut col);
                for (ri, c) in resid.iter_mut().zip(&col) {
                    *ri -= c * self.value[var];
                }
            }
        }
        for i in 0..r {
            let v: f64 = self.binv[i * r..(i + 1) * r]
                .iter()
                .zip(&resid)
                .map(|(b, x)| b * x)
                .sum();
            self.value[self.basis[i]] = v;
        }
    }

    fn finish(&self, y: &[f64]) -> RelaxedSolution {
        let n = self.n;
        let x: Vec<f64> = self.value[..n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let t = self.value[n];
        let objective = self.cost[n] * t
            + x.iter()
                .zip(&self.cost[..n])
                .map(|(xi, ci)| xi * ci)
                .sum::<f64>();
        // min b'y + u'z with z_j = max(0, d_j) on finitely bounded columns
        let box_term: f64 = (0..self.cost.len())
            .filter(|&v| self.basic_row[v].is_none() && self.upper[v].is_finite())
            .map(|v| self.upper[v] * self.reduced_cost(v, y).max(0.0))
            .sum();
        let dual_objective = self.problem.team_size as f64 * y[self.m] + box_term;
        RelaxedSolution {
            x,
            t,
            objective,
            dual_objective,
            status: SolveStatus::Optimal,
            pivots: self.pivots,
        }
    }
}
