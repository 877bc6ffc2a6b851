//! Piecewise-linear parade route and its per-step discretization.
//!
//! The parade occupies an arclength window `[tail(k), head(k)]` of a fixed
//! polyline at step `k`; each step's instance is `m` points spread uniformly
//! in arclength over that window, endpoints included.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Point2};

#[derive(Debug, Clone, PartialEq)]
pub struct RoutePath {
    waypoints: Vec<Point2>,
    cumulative: Vec<f64>,
}

impl RoutePath {
    pub fn new(waypoints: Vec<Point2>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::invalid("waypoints", "need at least two waypoints"));
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        cumulative.push(0.0);
        for (i, pair) in waypoints.windows(2).enumerate() {
            if !pair[1].is_finite() || !pair[0].is_finite() {
                return Err(Error::invalid(
                    format!("waypoints[{}]", i + 1),
                    "non-finite",
                ));
            }
            let len = distance(pair[0], pair[1]);
            if len == 0.0 {
                return Err(Error::invalid(
                    format!("waypoints[{}]", i + 1),
                    "repeats the previous waypoint",
                ));
            }
            cumulative.push(cumulative[i] + len);
        }
        Ok(Self {
            waypoints,
            cumulative,
        })
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn cumulative_arclength(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().expect("at least two waypoints")
    }

    /// The point at arclength `s` along the polyline.
    pub fn point_at_arclength(&self, s: f64) -> Result<Point2> {
        let total = self.total_length();
        if !(0.0..=total).contains(&s) {
            return Err(Error::OutOfRange {
                what: "arclength",
                value: s,
                min: 0.0,
                max: total,
            });
        }
        // first segment whose end reaches s
        let seg = self.cumulative[1..]
            .partition_point(|&c| c < s)
            .min(self.waypoints.len() - 2);
        let start = self.cumulative[seg];
        let len = self.cumulative[seg + 1] - start;
        let frac = ((s - start) / len).clamp(0.0, 1.0);
        if frac == 1.0 {
            return Ok(self.waypoints[seg + 1]);
        }
        Ok(self.waypoints[seg].lerp(self.waypoints[seg + 1], frac))
    }
}

/// Per-step occupied arclength windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParadeSchedule {
    pub tail: Vec<f64>,
    pub head: Vec<f64>,
    pub points_per_instance: usize,
}

impl ParadeSchedule {
    pub fn new(tail: Vec<f64>, head: Vec<f64>, points_per_instance: usize) -> Self {
        Self {
            tail,
            head,
            points_per_instance,
        }
    }

    /// Windows of fixed `length` whose head starts at `start` and advances by
    /// `speed` per step, clipped to `[0, total_length]`.
    pub fn constant_speed(
        path: &RoutePath,
        steps: usize,
        start: f64,
        length: f64,
        speed: f64,
        points_per_instance: usize,
    ) -> Self {
        let total = path.total_length();
        let (tail, head) = (0..steps)
            .map(|k| {
                let h = (start + speed * k as f64).clamp(0.0, total);
                ((h - length).clamp(0.0, total), h)
            })
            .unzip();
        Self::new(tail, head, points_per_instance)
    }

    /// The whole route at every step.
    pub fn full_route(path: &RoutePath, steps: usize, points_per_instance: usize) -> Self {
        Self::new(
            vec![0.0; steps],
            vec![path.total_length(); steps],
            points_per_instance,
        )
    }

    pub fn step_count(&self) -> usize {
        self.tail.len()
    }

    pub fn validate(&self, path: &RoutePath) -> Result<()> {
        if self.points_per_instance == 0 {
            return Err(Error::invalid("points_per_instance", "must be at least 1"));
        }
        if self.tail.len() != self.head.len() {
            return Err(Error::invalid(
                "head",
                format!(
                    "has {} entries but tail has {}",
                    self.head.len(),
                    self.tail.len()
                ),
            ));
        }
        if self.tail.is_empty() {
            return Err(Error::invalid("tail", "schedule has no steps"));
        }
        let total = path.total_length();
        for k in 0..self.tail.len() {
            let (t, h) = (self.tail[k], self.head[k]);
            if !(t.is_finite() && h.is_finite() && 0.0 <= t && t <= h && h <= total) {
                return Err(Error::invalid(
                    format!("tail[{k}]"),
                    format!("window [{t}, {h}] must satisfy 0 <= tail <= head <= {total}"),
                ));
            }
            if k > 0 && (t < self.tail[k - 1] || h < self.head[k - 1]) {
                return Err(Error::invalid(
                    format!("tail[{k}]"),
                    "tail and head must be nondecreasing",
                ));
            }
        }
        Ok(())
    }

    /// Arclengths of the `m` discretization points at step `k`.
    pub fn arclengths(&self, k: usize) -> Result<Vec<f64>> {
        if k >= self.step_count() {
            return Err(Error::OutOfRange {
                what: "step index",
                value: k as f64,
                min: 0.0,
                max: self.step_count().saturating_sub(1) as f64,
            });
        }
        let (t, h) = (self.tail[k], self.head[k]);
        let m = self.points_per_instance;
        if m == 1 {
            return Ok(vec![t]);
        }
        Ok((0..m)
            .map(|j| {
                if j == m - 1 {
                    h
                } else {
                    t + (h - t) * (j as f64 / (m - 1) as f64)
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteInstance {
    pub step_index: usize,
    pub points: Vec<Point2>,
}

/// Discretizes the parade window at step `k` into `m` route points.
pub fn route_instance(path: &RoutePath, sched: &ParadeSchedule, k: usize) -> Result<RouteInstance> {
    let points = sched
        .arclengths(k)?
        .into_iter()
        .map(|s| path.point_at_arclength(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(RouteInstance {
        step_index: k,
        points,
    })
}
