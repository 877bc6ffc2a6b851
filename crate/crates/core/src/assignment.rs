//! Greedy nearest-neighbour matching of robots to new guard positions.
//!
//! Distances are straight-line and ignore obstacles, so a transition between
//! steps may pass through a building.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Point2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamState {
    pub robot_positions: Vec<Point2>,
    pub step_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    /// `robot_to_target[r]` is the index of the target robot `r` flies to.
    pub robot_to_target: Vec<usize>,
    pub total_distance: f64,
}

impl Assignment {
    pub fn identity(size: usize) -> Self {
        Self {
            robot_to_target: (0..size).collect(),
            total_distance: 0.0,
        }
    }
}

/// Repeatedly matches the closest unmatched (robot, target) pair.
///
/// Ties go to the lower robot index, then the lower target index.
pub fn nearest_neighbor_assign(current: &TeamState, targets: &[Point2]) -> Result<Assignment> {
    let robots = &current.robot_positions;
    if robots.len() != targets.len() {
        return Err(Error::invalid(
            "targets",
            format!("{} targets for {} robots", targets.len(), robots.len()),
        ));
    }
    let mut pairs: Vec<(f64, usize, usize)> = robots
        .iter()
        .enumerate()
        .flat_map(|(r, &rp)| {
            targets
                .iter()
                .enumerate()
                .map(move |(t, &tp)| (distance(rp, tp), r, t))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let size = robots.len();
    let mut robot_to_target = vec![usize::MAX; size];
    let mut target_taken = vec![false; size];
    let mut total_distance = 0.0;
    let mut matched = 0;
    for (d, r, t) in pairs {
        if robot_to_target[r] != usize::MAX || target_taken[t] {
            continue;
        }
        robot_to_target[r] = t;
        target_taken[t] = true;
        total_distance += d;
        matched += 1;
        if matched == size {
            break;
        }
    }
    Ok(Assignment {
        robot_to_target,
        total_distance,
    })
}
