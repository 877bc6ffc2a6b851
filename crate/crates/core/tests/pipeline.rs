use std::path::PathBuf;

use paradecov_core::io::{load_scenario, write_results, ResultLine};
use paradecov_core::oracle::{brute_force, DEFAULT_LIMIT};
use paradecov_core::*;

fn load(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name);
    load_scenario(path).unwrap()
}

fn check_records(s: &Scenario, result: &RunResult) {
    let m = s.schedule.points_per_instance;
    let mut previous: Option<&StepRecord> = None;
    for (k, rec) in result.records.iter().enumerate() {
        assert_eq!(rec.step_index, k);
        assert_eq!(rec.selected_indices.len(), s.team_size);
        assert!(rec.selected_indices.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(rec.point_coverage.len(), m);
        assert_eq!(rec.coverage_histogram.iter().sum::<usize>(), m);
        assert_eq!(
            rec.point_coverage[rec.min_coverage_point_index],
            rec.t_boolean
        );
        assert!(rec.converged != rec.rounded);

        let mut perm = rec.assignment.clone();
        perm.sort_unstable();
        assert_eq!(perm, (0..s.team_size).collect::<Vec<_>>());
        for (r, &t) in rec.assignment.iter().enumerate() {
            assert_eq!(rec.robot_positions[r], rec.selected_positions[t]);
        }
        match previous {
            None => assert_eq!(rec.travel_distance, 0.0),
            Some(prev) => {
                let moved: f64 = prev
                    .robot_positions
                    .iter()
                    .zip(&rec.robot_positions)
                    .map(|(a, b)| distance(*a, *b))
                    .sum();
                assert!((moved - rec.travel_distance).abs() < 1e-9);
            }
        }
        previous = Some(rec);
    }
    assert_eq!(result.totals.steps, result.records.len());
    assert_eq!(
        result.totals.converged_steps + result.totals.rounded_steps,
        result.records.len()
    );
}

#[test]
fn shipped_scenarios_produce_consistent_records() {
    for name in ["tiny.json", "city10.json"] {
        let s = load(name);
        let result = run(&s).unwrap();
        assert_eq!(result.records.len(), s.step_count());
        assert_eq!(result.digest, s.digest());
        check_records(&s, &result);
    }
}

#[test]
fn tiny_matches_the_oracle_bound() {
    let s = load("tiny.json");
    let result = run(&s).unwrap();
    for rec in &result.records {
        let a = s.coverage_matrix(rec.step_index).unwrap();
        let exact = brute_force(&a, s.team_size, DEFAULT_LIMIT).unwrap();
        assert!(rec.t_boolean <= exact.best_value);
        assert_eq!(a.min_coverage(&rec.selected_indices), rec.t_boolean);
    }
}

#[test]
fn result_stream_parses_back() {
    let s = load("tiny.json");
    let result = run(&s).unwrap();
    let mut buf = Vec::new();
    write_results(&mut buf, &result, s.name.as_deref()).unwrap();
    let lines: Vec<ResultLine> = String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), s.step_count() + 2);
    assert!(matches!(&lines[0], ResultLine::Header { steps, .. } if *steps == s.step_count()));
    for (line, rec) in lines[1..=s.step_count()].iter().zip(&result.records) {
        assert_eq!(line, &ResultLine::Step(rec.clone()));
    }
    assert_eq!(
        lines.last().unwrap(),
        &ResultLine::Footer(result.totals.clone())
    );
}

#[test]
fn larger_candidate_sets_extend_smaller_ones() {
    let s = load("city10.json");
    let small = Scenario {
        candidate_count: 512,
        ..s.clone()
    };
    let large = Scenario {
        candidate_count: 2048,
        ..s
    };
    let a = small.candidates_for_step(0).unwrap();
    let b = large.candidates_for_step(0).unwrap();
    assert_eq!(a.positions[..], b.positions[..512]);
}
