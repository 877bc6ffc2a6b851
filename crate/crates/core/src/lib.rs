//! Camera-equipped aerial guards positioned over a moving parade route.
//!
//! At every step the parade's occupied stretch of route is discretized into
//! `m` points, candidate guard positions are sampled in free space, and a
//! coverage matrix `A` records which candidate sees which route point through
//! the obstacles and within its field of view. A team of `S` guards is then
//! placed to maximize the minimum coverage `min_j (A x)_j` over the route:
//! the Boolean program is relaxed to a linear program and a Boolean
//! placement is recovered by iterated reweighted l1 penalties. Robots move
//! to the new positions by greedy nearest-neighbour matching.
//!
//! The [`simulator::run`] function drives the whole loop from a
//! [`Scenario`], usually loaded with [`io::load_scenario`].

pub mod assignment;
pub mod candidates;
pub mod coverage;
pub mod error;
pub mod geometry;
pub mod heuristic;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod route;
pub mod simulator;
pub mod timing;

pub use assignment::{nearest_neighbor_assign, Assignment, TeamState};
pub use candidates::{sample_candidates, CandidateSet, ResampleMode};
pub use coverage::{
    best_heading, build_coverage_matrix, coverage_column, visible, Attenuation, CoverageMatrix,
    HeadingPolicy, SensorModel,
};
pub use error::{Error, Result};
pub use geometry::{distance, Point2, Rect, World};
pub use heuristic::{cardinality_residual, recover_boolean, HeuristicConfig, PlacementSolution};
pub use lp::{solve_relaxation, RelaxedProblem, RelaxedSolution, SolveStatus};
pub use oracle::{brute_force, OracleResult};
pub use route::{route_instance, ParadeSchedule, RouteInstance, RoutePath};
pub use simulator::{run, RunResult, RunTotals, Scenario, StepRecord};
