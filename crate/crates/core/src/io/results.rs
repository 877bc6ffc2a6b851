//! JSON Lines result stream: one header line, one line per step, one footer.
//!
//! Floats are written with the shortest representation that parses back to
//! the same `f64`, so no precision is lost.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::simulator::{RunResult, RunTotals, StepRecord};

/// Fields carrying wall-clock measurements; they differ between identical runs.
pub const TIMING_FIELDS: [&str; 3] = ["solve_seconds", "mean_solve_seconds", "max_solve_seconds"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum ResultLine {
    Header {
        format_version: u32,
        scenario: Option<String>,
        digest: String,
        steps: usize,
    },
    Step(StepRecord),
    Footer(RunTotals),
}

pub fn result_lines(result: &RunResult, scenario_name: Option<&str>) -> Vec<ResultLine> {
    let mut lines = Vec::with_capacity(result.records.len() + 2);
    lines.push(ResultLine::Header {
        format_version: 1,
        scenario: scenario_name.map(str::to_owned),
        digest: result.digest.clone(),
        steps: result.records.len(),
    });
    lines.extend(result.records.iter().cloned().map(ResultLine::Step));
    lines.push(ResultLine::Footer(result.totals.clone()));
    lines
}

pub fn write_results<W: Write>(
    mut out: W,
    result: &RunResult,
    scenario_name: Option<&str>,
) -> std::io::Result<()> {
    for line in result_lines(result, scenario_name) {
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Parses one line and drops the timing fields, for run-to-run comparison.
pub fn strip_timing(line: &str) -> serde_json::Result<Value> {
    let mut v: Value = serde_json::from_str(line)?;
    if let Value::Object(map) = &mut v {
        for f in TIMING_FIELDS {
            map.remove(f);
        }
    }
    Ok(v)
}
