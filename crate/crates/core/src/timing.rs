//! Solve-time sweeps over team size and candidate count.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::simulator::{run, Scenario};

pub const CSV_HEADER: &str = "robots,candidates,step,solve_seconds,iterations,t_boolean";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub robots: usize,
    pub candidates: usize,
    pub step: usize,
    pub solve_seconds: f64,
    pub iterations: usize,
    pub t_boolean: f64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.robots,
            self.candidates,
            self.step,
            self.solve_seconds,
            self.iterations,
            self.t_boolean
        )
    }
}

/// Runs `base` once per `(robots, candidates)` combination, robots outermost,
/// and reports every step.
pub fn sweep(base: &Scenario, robots: &[usize], candidates: &[usize]) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(robots.len() * candidates.len() * base.step_count());
    for &s in robots {
        for &n in candidates {
            let scenario = Scenario {
                team_size: s,
                candidate_count: n,
                ..base.clone()
            };
            let result = run(&scenario)?;
            rows.extend(result.records.iter().map(|r| BenchRow {
                robots: s,
                candidates: n,
                step: r.step_index,
                solve_seconds: r.solve_seconds,
                iterations: r.iterations,
                t_boolean: r.t_boolean,
            }));
        }
    }
    Ok(rows)
}

/// Mean solve time of the rows matching `(robots, candidates)`.
pub fn mean_solve_seconds(rows: &[BenchRow], robots: usize, candidates: usize) -> Option<f64> {
    let times: Vec<f64> = rows
        .iter()
        .filter(|r| r.robots == robots && r.candidates == candidates)
        .map(|r| r.solve_seconds)
        .collect();
    (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64)
}
