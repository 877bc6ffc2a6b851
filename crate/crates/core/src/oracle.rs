//! Exhaustive max-min placement for small instances.

use crate::coverage::CoverageMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_subset: Vec<usize>,
    pub best_value: f64,
    pub subsets_evaluated: u64,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Evaluates every `team_size`-subset in lexicographic order and keeps the
/// first one attaining the largest minimum coverage.
pub fn brute_force(
    coverage: &CoverageMatrix,
    team_size: usize,
    limit: u64,
) -> Result<OracleResult> {
    let n = coverage.cols();
    if team_size == 0 || team_size > n {
        return Err(Error::Infeasible {
            team_size,
            candidates: n,
        });
    }
    let subsets = binomial(n, team_size);
    if subsets > limit as u128 {
        return Err(Error::OracleLimit {
            n,
            k: team_size,
            subsets,
            limit,
        });
    }

    let mut subset: Vec<usize> = (0..team_size).collect();
    let mut best = OracleResult {
        best_value: coverage.min_coverage(&subset),
        best_subset: subset.clone(),
        subsets_evaluated: 1,
    };
    while next_combination(&mut subset, n) {
        let value = coverage.min_coverage(&subset);
        best.subsets_evaluated += 1;
        if value > best.best_value {
            best.best_value = value;
            best.best_subset.clone_from(&subset);
        }
    }
    Ok(best)
}

/// Advances `c` to the next combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}
