//! Boolean recovery by iterated reweighted l1 penalties.
//!
//! Each round solves the relaxation with a linear penalty `w'x`, then sets
//! `w_i = alpha / (tau + x_i)` so entries that came out small are pushed
//! harder towards zero in the next round. The loop stops once every entry is
//! within `bool_tol` of 0 or 1.

use serde::{Deserialize, Serialize};

use crate::coverage::CoverageMatrix;
use crate::error::{Error, Result};
use crate::lp::{solve_relaxation, RelaxedProblem, SolveStatus};

/// Weight of the total-coverage tie-break used in the first (unweighted) round.
pub const FIRST_ROUND_TIEBREAK: f64 = 1e-6;

/// Largest entry change between rounds still treated as "x did not move".
const STALL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeuristicConfig {
    pub alpha: f64,
    pub tau: f64,
    pub bool_tol: f64,
    pub max_iters: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            tau: 1e-4,
            bool_tol: 1e-4,
            max_iters: 50,
        }
    }
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.alpha) {
            return Err(Error::invalid("alpha", "must be positive"));
        }
        if !positive(self.tau) {
            return Err(Error::invalid("tau", "must be positive"));
        }
        if !(positive(self.bool_tol) && self.bool_tol < 0.5) {
            return Err(Error::invalid("bool_tol", "must be in (0, 0.5)"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be at least 1"));
        }
        Ok(())
    }

    /// Penalty weight for an entry that took value `x` in the previous round.
    pub fn weight(&self, x: f64) -> f64 {
        self.alpha / (self.tau + x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementSolution {
    /// Chosen candidate indices, ascending.
    pub selected: Vec<usize>,
    /// Relaxed vector from the last round.
    pub x: Vec<f64>,
    /// `min_j (A x_bool)_j` of the selection.
    pub t_boolean: f64,
    /// Number of LP solves performed. Stops short of `max_iters` when the
    /// reweighting reaches a fixed point.
    pub iterations: usize,
    pub converged: bool,
    /// Set when the selection came from rounding, after the iteration cap or
    /// a fixed point of the reweighting.
    pub rounded: bool,
}

/// `sum_i min(x_i, 1 - x_i)`; zero exactly for Boolean vectors.
pub fn cardinality_residual(x: &[f64]) -> f64 {
    x.iter().map(|&v| v.min(1.0 - v)).sum()
}

fn is_boolean(x: &[f64], tol: f64) -> bool {
    x.iter().all(|&v| v.min((1.0 - v).abs()).abs() <= tol)
}

/// Indices of the `s` largest entries, ties to the lower index, sorted ascending.
fn top_entries(x: &[f64], s: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[j].total_cmp(&x[i]).then(i.cmp(&j)));
    let mut chosen = order[..s].to_vec();
    chosen.sort_unstable();
    chosen
}

/// Runs the reweighting loop and returns a placement of exactly `team_size` guards.
pub fn recover_boolean(
    coverage: &CoverageMatrix,
    team_size: usize,
    cfg: &HeuristicConfig,
) -> Result<PlacementSolution> {
    cfg.validate()?;
    let n = coverage.cols();
    if team_size > n {
        return Err(Error::Infeasible {
            team_size,
            candidates: n,
        });
    }

    let mut weights = vec![0.0; n];
    let mut x: Vec<f64> = Vec::new();
    let mut rounds = 0;
    for round in 1..=cfg.max_iters {
        rounds = round;
        let problem = RelaxedProblem::new(coverage, team_size)
            .with_weights(weights.clone())
            .with_tiebreak(if round == 1 {
                FIRST_ROUND_TIEBREAK
            } else {
                0.0
            });
        let sol = solve_relaxation(&problem)?;
        match sol.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => {
                return Err(Error::Infeasible {
                    team_size,
                    candidates: n,
                })
            }
            SolveStatus::Unbounded => {
                return Err(Error::Solver(
                    "relaxation unbounded (no route points)".into(),
                ))
            }
        }
        // a repeated x is a fixed point of the reweighting: equal weights on
        // the fractional entries make the penalty constant on that face, so
        // every remaining round returns the same point
        let stalled = round > 1
            && sol
                .x
                .iter()
                .zip(&x)
                .all(|(a, b)| (a - b).abs() <= STALL_TOL);
        x = sol.x;

        if is_boolean(&x, cfg.bool_tol) {
            let selected: Vec<usize> = (0..n).filter(|&i| x[i] > 0.5).collect();
            if selected.len() == team_size {
                return Ok(PlacementSolution {
                    t_boolean: coverage.min_coverage(&selected),
                    selected,
                    x,
                    iterations: round,
                    converged: true,
                    rounded: false,
                });
            }
        }
        if stalled {
            break;
        }
        for (w, &xi) in weights.iter_mut().zip(&x) {
            *w = cfg.weight(xi.max(0.0));
        }
    }

    let selected = top_entries(&x, team_size);
    Ok(PlacementSolution {
        t_boolean: coverage.min_coverage(&selected),
        selected,
        x,
        iterations: rounds,
        converged: false,
        rounded: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[Vec<f64>]) -> CoverageMatrix {
        CoverageMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_full_team() {
        let a = matrix(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let sol = recover_boolean(&a, 3, &HeuristicConfig::default()).unwrap();
        assert_eq!(sol.selected, vec![0, 1, 2]);
        assert_eq!(sol.t_boolean, 1.0);
        assert!(sol.converged && !sol.rounded);
        assert!(sol.iterations <= 5);
    }

    #[test]
    fn picks_the_column_covering_both_points() {
        let a = matrix(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]);
        let sol = recover_boolean(&a, 1, &HeuristicConfig::default()).unwrap();
        assert_eq!(sol.selected, vec![1]);
        assert_eq!(sol.t_boolean, 1.0);
    }

    #[test]
    fn symmetric_identity_terminates_with_one_pick() {
        let a = matrix(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let sol = recover_boolean(&a, 1, &HeuristicConfig::default()).unwrap();
        assert_eq!(sol.selected.len(), 1);
        assert_eq!(sol.t_boolean, 0.0);
        assert_eq!(
            sol,
            recover_boolean(&a, 1, &HeuristicConfig::default()).unwrap()
        );
    }

    #[test]
    fn uniform_fractional_point_stops_early() {
        // x = 1/3 everywhere; equal weights keep the LP there
        let a = matrix(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let sol = recover_boolean(&a, 1, &HeuristicConfig::default()).unwrap();
        assert_eq!(sol.iterations, 2);
        assert!(sol.rounded && !sol.converged);
        assert_eq!(sol.selected, vec![0]);
        assert!(sol.x.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-9));
    }

    #[test]
    fn rounding_fallback_keeps_team_size() {
        let a = matrix(&[vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]]);
        let cfg = HeuristicConfig {
            max_iters: 1,
            ..HeuristicConfig::default()
        };
        let sol = recover_boolean(&a, 1, &cfg).unwrap();
        assert_eq!(sol.selected.len(), 1);
        assert_eq!(sol.t_boolean, a.min_coverage(&sol.selected));
        assert_eq!(sol.rounded, !sol.converged);
    }

    #[test]
    fn too_large_team_is_infeasible() {
        let a = matrix(&[vec![1.0, 0.0]]);
        assert!(matches!(
            recover_boolean(&a, 3, &HeuristicConfig::default()),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        assert_eq!(cardinality_residual(&[0.0, 1.0, 1.0]), 0.0);
        assert_eq!(cardinality_residual(&[0.5, 0.5]), 1.0);
        assert!((cardinality_residual(&[0.9, 0.2, 0.9]) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn top_entries_breaks_ties_by_index() {
        assert_eq!(top_entries(&[0.5, 0.9, 0.5, 0.5], 2), vec![0, 1]);
        assert_eq!(top_entries(&[0.1, 0.2, 0.3], 3), vec![0, 1, 2]);
    }

    #[test]
    fn weights_decrease_in_x() {
        let cfg = HeuristicConfig::default();
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        for pair in xs.windows(2) {
            assert!(cfg.weight(pair[1]) < cfg.weight(pair[0]));
        }
        assert!((cfg.weight(0.0) - 1e4).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let bad = HeuristicConfig {
            bool_tol: 0.5,
            ..HeuristicConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = HeuristicConfig {
            tau: 0.0,
            ..HeuristicConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
