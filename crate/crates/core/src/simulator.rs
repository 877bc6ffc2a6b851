//! The per-step planning loop.
//!
//! Each step discretizes the parade window, builds the coverage matrix for the
//! candidate set, recovers a Boolean placement and hands the new positions to
//! the team by nearest-neighbour matching. Robots start at the first step's
//! placement.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assignment::{nearest_neighbor_assign, Assignment, TeamState};
use crate::candidates::{sample_candidates, CandidateSet, ResampleMode};
use crate::coverage::{build_coverage_matrix, coverage_column, CoverageMatrix, SensorModel};
use crate::error::{Error, Result};
use crate::geometry::{Point2, World};
use crate::heuristic::{recover_boolean, HeuristicConfig};
use crate::route::{route_instance, ParadeSchedule, RouteInstance, RoutePath};

/// Tolerance when cross-checking a step's coverage against a recomputation.
pub const RECORD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: Option<String>,
    pub world: World,
    pub path: RoutePath,
    pub schedule: ParadeSchedule,
    pub team_size: usize,
    pub sensor: SensorModel,
    pub candidate_count: usize,
    pub seed: u64,
    pub resample_mode: ResampleMode,
    pub heuristic: HeuristicConfig,
    /// Nominal time between steps in seconds; informational only.
    pub sampling_period: Option<f64>,
}

impl Scenario {
    /// Checks every invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        let b = &self.world.bounds;
        if !b.min.is_finite() || !b.max.is_finite() || b.min.x >= b.max.x || b.min.y >= b.max.y {
            return Err(Error::invalid(
                "world.bounds",
                "zero-area or non-finite rectangle",
            ));
        }
        self.world.validate().map_err(|e| e.within("world"))?;
        for (i, p) in self.path.waypoints().iter().enumerate() {
            if !self.world.point_in_free_space(*p) {
                return Err(Error::invalid(
                    format!("route.waypoints[{i}]"),
                    "not in free space",
                ));
            }
        }
        if self.schedule.points_per_instance == 0 {
            return Err(Error::invalid("points_per_instance", "must be at least 1"));
        }
        self.schedule
            .validate(&self.path)
            .map_err(|e| e.within("schedule"))?;
        if self.team_size == 0 {
            return Err(Error::invalid("team_size", "must be at least 1"));
        }
        if self.candidate_count == 0 {
            return Err(Error::invalid("candidate_count", "must be at least 1"));
        }
        if self.team_size > self.candidate_count {
            return Err(Error::invalid(
                "team_size",
                format!(
                    "{} exceeds candidate_count {}",
                    self.team_size, self.candidate_count
                ),
            ));
        }
        self.sensor.validate().map_err(|e| e.within("sensor"))?;
        self.heuristic
            .validate()
            .map_err(|e| e.within("heuristic"))?;
        if let Some(ts) = self.sampling_period {
            if !(ts.is_finite() && ts > 0.0) {
                return Err(Error::invalid("sampling_period", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn step_count(&self) -> usize {
        self.schedule.step_count()
    }

    pub fn route_instance(&self, k: usize) -> Result<RouteInstance> {
        route_instance(&self.path, &self.schedule, k)
    }

    pub fn candidates_for_step(&self, k: usize) -> Result<CandidateSet> {
        sample_candidates(
            &self.world,
            self.candidate_count,
            self.resample_mode.seed_for_step(self.seed, k),
        )
    }

    /// Coverage matrix `A(k)` for step `k`.
    pub fn coverage_matrix(&self, k: usize) -> Result<CoverageMatrix> {
        let inst = self.route_instance(k)?;
        let cands = self.candidates_for_step(k)?;
        build_coverage_matrix(&self.world, &cands, &inst, &self.sensor)
    }

    /// Per-point coverage of guards at `guards`, computed from the geometry.
    pub fn point_coverage(&self, guards: &[Point2], inst: &RouteInstance) -> Result<Vec<f64>> {
        let mut total = vec![0.0; inst.points.len()];
        for &g in guards {
            for (t, c) in total
                .iter_mut()
                .zip(coverage_column(&self.world, g, inst, &self.sensor)?)
            {
                *t += c;
            }
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step_index: usize,
    /// Candidate indices of the placement, ascending.
    pub selected_indices: Vec<usize>,
    pub selected_positions: Vec<Point2>,
    /// Position assigned to each robot, by robot index.
    pub robot_positions: Vec<Point2>,
    pub assignment: Vec<usize>,
    pub travel_distance: f64,
    pub t_boolean: f64,
    pub min_coverage_point_index: usize,
    pub iterations: usize,
    pub converged: bool,
    pub rounded: bool,
    /// Wall-clock seconds spent in the relaxation and reweighting loop.
    pub solve_seconds: f64,
    /// Additive coverage of each route point.
    pub point_coverage: Vec<f64>,
    /// `coverage_histogram[c]` counts route points with `floor(coverage) = c`
    /// (capped at the team size).
    pub coverage_histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTotals {
    pub steps: usize,
    pub mean_solve_seconds: f64,
    pub max_solve_seconds: f64,
    pub mean_t_boolean: f64,
    pub min_t_boolean: f64,
    pub converged_steps: usize,
    pub rounded_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub digest: String,
    pub records: Vec<StepRecord>,
    pub totals: RunTotals,
}

fn histogram(coverage: &[f64], team_size: usize) -> Vec<usize> {
    let mut bins = vec![0; team_size + 1];
    for &c in coverage {
        bins[(c.floor().max(0.0) as usize).min(team_size)] += 1;
    }
    bins
}

fn solve_step(
    scenario: &Scenario,
    k: usize,
    fixed: Option<&CandidateSet>,
    team: Option<&TeamState>,
) -> Result<StepRecord> {
    let inst = scenario.route_instance(k)?;
    let owned;
    let cands = match fixed {
        Some(c) => c,
        None => {
            owned = scenario.candidates_for_step(k)?;
            &owned
        }
    };
    let a = build_coverage_matrix(&scenario.world, cands, &inst, &scenario.sensor)?;

    let started = Instant::now();
    let placement = recover_boolean(&a, scenario.team_size, &scenario.heuristic)?;
    let solve_seconds = started.elapsed().as_secs_f64();

    let selected_positions: Vec<Point2> = placement
        .selected
        .iter()
        .map(|&i| cands.positions[i])
        .collect();
    let assignment = match team {
        None => Assignment::identity(scenario.team_size),
        Some(state) => nearest_neighbor_assign(state, &selected_positions)?,
    };
    let robot_positions = assignment
        .robot_to_target
        .iter()
        .map(|&t| selected_positions[t])
        .collect();

    let point_coverage = scenario.point_coverage(&selected_positions, &inst)?;
    let (min_coverage_point_index, recomputed) =
        point_coverage
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (j, c)| if c < best.1 { (j, c) } else { best },
            );
    if (recomputed - placement.t_boolean).abs() > RECORD_TOL {
        return Err(Error::Solver(format!(
            "placement coverage {} disagrees with geometric recomputation {recomputed}",
            placement.t_boolean
        )));
    }

    Ok(StepRecord {
        step_index: k,
        selected_indices: placement.selected,
        selected_positions,
        robot_positions,
        assignment: assignment.robot_to_target,
        travel_distance: assignment.total_distance,
        t_boolean: placement.t_boolean,
        min_coverage_point_index,
        iterations: placement.iterations,
        converged: placement.converged,
        rounded: placement.rounded,
        solve_seconds,
        coverage_histogram: histogram(&point_coverage, scenario.team_size),
        point_coverage,
    })
}

/// Runs every step of the scenario in order.
pub fn run(scenario: &Scenario) -> Result<RunResult> {
    scenario.validate()?;
    let fixed = match scenario.resample_mode {
        ResampleMode::Fixed => Some(scenario.candidates_for_step(0)?),
        ResampleMode::PerIteration => None,
    };

    let mut records: Vec<StepRecord> = Vec::with_capacity(scenario.step_count());
    let mut team: Option<TeamState> = None;
    for k in 0..scenario.step_count() {
        let rec =
            solve_step(scenario, k, fixed.as_ref(), team.as_ref()).map_err(|e| e.at_step(k))?;
        team = Some(TeamState {
            robot_positions: rec.robot_positions.clone(),
            step_index: k,
        });
        records.push(rec);
    }

    let steps = records.len();
    let totals = RunTotals {
        steps,
        mean_solve_seconds: records.iter().map(|r| r.solve_seconds).sum::<f64>() / steps as f64,
        max_solve_seconds: records.iter().map(|r| r.solve_seconds).fold(0.0, f64::max),
        mean_t_boolean: records.iter().map(|r| r.t_boolean).sum::<f64>() / steps as f64,
        min_t_boolean: records
            .iter()
            .map(|r| r.t_boolean)
            .fold(f64::INFINITY, f64::min),
        converged_steps: records.iter().filter(|r| r.converged).count(),
        rounded_steps: records.iter().filter(|r| r.rounded).count(),
    };
    Ok(RunResult {
        digest: scenario.digest(),
        records,
        totals,
    })
}
