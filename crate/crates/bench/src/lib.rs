//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use paradecov_core::io::load_scenario;
use paradecov_core::Scenario;

/// Directory holding the shipped scenario files.
pub fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

/// The city scenario with team size and candidate count overridden.
pub fn city10(team_size: usize, candidate_count: usize) -> Scenario {
    let base = load_scenario(scenarios_dir().join("city10.json")).expect("city10.json loads");
    Scenario {
        team_size,
        candidate_count,
        ..base
    }
}
