//! Coverage of route points by camera-equipped guards.
//!
//! A guard sees a route point when the sight line is not occluded and the
//! point is within range. The camera points along a single heading and only
//! covers points inside its angular field of view; the heading is either the
//! one that covers the most visible points (`Sweep`) or the bearing to the
//! route centroid (`Centroid`).

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::geometry::{distance, normalize_angle, Point2, World};
use crate::route::RouteInstance;

/// Angular slack when deciding whether a bearing lies inside the FOV window.
pub const WINDOW_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attenuation {
    /// 1 for a covered point, 0 otherwise.
    #[default]
    Binary,
    /// `1 - d / max_range` for a covered point at distance `d`.
    LinearDecay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadingPolicy {
    #[default]
    Sweep,
    Centroid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorModel {
    pub fov_deg: f64,
    /// `None` means unbounded range.
    #[serde(default)]
    pub max_range: Option<f64>,
    #[serde(default)]
    pub attenuation: Attenuation,
    #[serde(default)]
    pub heading_policy: HeadingPolicy,
}

impl Default for SensorModel {
    fn default() -> Self {
        Self {
            fov_deg: 175.0,
            max_range: None,
            attenuation: Attenuation::Binary,
            heading_policy: HeadingPolicy::Sweep,
        }
    }
}

impl SensorModel {
    pub fn with_fov(fov_deg: f64) -> Self {
        Self {
            fov_deg,
            ..Self::default()
        }
    }

    pub fn fov_rad(&self) -> f64 {
        self.fov_deg.to_radians()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fov_deg > 0.0 && self.fov_deg <= 360.0) {
            return Err(Error::invalid(
                "fov_deg",
                format!("{} not in (0, 360]", self.fov_deg),
            ));
        }
        match self.max_range {
            Some(r) if !(r > 0.0 && r.is_finite()) => {
                Err(Error::invalid("max_range", format!("{r} must be positive")))
            }
            None if self.attenuation == Attenuation::LinearDecay => Err(Error::invalid(
                "attenuation",
                "linear_decay requires a bounded max_range",
            )),
            _ => Ok(()),
        }
    }
}

/// Line of sight and range check, ignoring the field of view.
pub fn visible(world: &World, guard: Point2, target: Point2, model: &SensorModel) -> bool {
    if let Some(r) = model.max_range {
        if distance(guard, target) > r {
            return false;
        }
    }
    !world.segment_blocked(guard, target)
}

/// Whether `angle` lies in the window of width `fov` centred on `heading`.
pub fn in_window(angle: f64, heading: f64, fov: f64) -> bool {
    fov >= TAU || normalize_angle(angle - heading).abs() <= fov / 2.0 + WINDOW_EPS
}

/// Heading whose FOV window contains the most of `angles`, with that count.
///
/// Among optimal headings the smallest in `[-pi, pi)` is returned. Every
/// maximal set of covered angles is reached by a window whose clockwise-most
/// edge touches one of the angles, so only the headings `a - fov/2` (and the
/// wrap point `-pi`) need evaluating; counts come from a binary search over
/// the sorted angles unrolled twice around the circle.
pub fn best_heading(angles: &[f64], fov: f64) -> (f64, usize) {
    if angles.is_empty() {
        return (0.0, 0);
    }
    let v = angles.len();
    let mut sorted: Vec<f64> = angles.iter().map(|&a| normalize_angle(a)).collect();
    sorted.sort_by(f64::total_cmp);
    if fov >= TAU {
        return (-PI, v);
    }
    let unrolled: Vec<f64> = sorted
        .iter()
        .copied()
        .chain(sorted.iter().map(|a| a + TAU))
        .collect();

    let mut best = (-PI, count_in_window(&sorted, -PI, fov));
    for (k, &a) in sorted.iter().enumerate() {
        // window [a - fov, a] ending at this angle, on the second lap
        let right = unrolled[k + v];
        let lo = unrolled.partition_point(|&u| u < right - fov - WINDOW_EPS);
        let hi = unrolled.partition_point(|&u| u <= right + WINDOW_EPS);
        let count = (hi - lo).min(v);
        let heading = normalize_angle(a - fov / 2.0);
        if count > best.1 || (count == best.1 && heading < best.0) {
            best = (heading, count);
        }
    }
    // report the count under the same predicate used for coverage entries
    (best.0, count_in_window(&sorted, best.0, fov))
}

fn count_in_window(angles: &[f64], heading: f64, fov: f64) -> usize {
    angles
        .iter()
        .filter(|&&a| in_window(a, heading, fov))
        .count()
}

/// Coverage of each route point by a guard at `guard`.
pub fn coverage_column(
    world: &World,
    guard: Point2,
    inst: &RouteInstance,
    model: &SensorModel,
) -> Result<Vec<f64>> {
    model.validate()?;
    let fov = model.fov_rad();
    let seen: Vec<bool> = inst
        .points
        .iter()
        .map(|&p| visible(world, guard, p, model))
        .collect();
    let bearings: Vec<f64> = inst.points.iter().map(|&p| guard.bearing_to(p)).collect();

    let heading = match model.heading_policy {
        HeadingPolicy::Sweep => {
            let visible_bearings: Vec<f64> = bearings
                .iter()
                .zip(&seen)
                .filter(|(_, &s)| s)
                .map(|(&b, _)| b)
                .collect();
            best_heading(&visible_bearings, fov).0
        }
        HeadingPolicy::Centroid => {
            let m = inst.points.len().max(1) as f64;
            let (sx, sy) = inst
                .points
                .iter()
                .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
            guard.bearing_to(Point2::new(sx / m, sy / m))
        }
    };

    Ok(inst
        .points
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            if !seen[j] || !in_window(bearings[j], heading, fov) {
                return 0.0;
            }
            match (model.attenuation, model.max_range) {
                (Attenuation::LinearDecay, Some(r)) => (1.0 - distance(guard, p) / r).max(0.0),
                _ => 1.0,
            }
        })
        .collect())
}

/// Dense `m x n` coverage matrix stored column-major; column `i` is the
/// coverage vector of candidate `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    pub step_index: usize,
}

impl CoverageMatrix {
    pub fn from_columns(rows: usize, columns: Vec<Vec<f64>>, step_index: usize) -> Result<Self> {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for (i, c) in columns.into_iter().enumerate() {
            if c.len() != rows {
                return Err(Error::invalid(
                    format!("columns[{i}]"),
                    format!("has {} entries, expected {rows}", c.len()),
                ));
            }
            data.extend(c);
        }
        Self::from_data(rows, cols, data, step_index)
    }

    /// Builds a matrix from row vectors, convenient for small literal examples.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(j) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::invalid(format!("rows[{j}]"), "ragged row"));
        }
        let mut data = Vec::with_capacity(m * n);
        for i in 0..n {
            data.extend(rows.iter().map(|r| r[i]));
        }
        Self::from_data(m, n, data, 0)
    }

    fn from_data(rows: usize, cols: usize, data: Vec<f64>, step_index: usize) -> Result<Self> {
        if let Some(pos) = data.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(
                format!("entries[{}][{}]", pos % rows.max(1), pos / rows.max(1)),
                "coverage entries must be finite and nonnegative",
            ));
        }
        Ok(Self {
            rows,
            cols,
            data,
            step_index,
        })
    }

    /// Number of route points `m`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of candidates `n`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.rows + row]
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Additive coverage `A x` of a Boolean selection.
    pub fn coverage_of(&self, selected: &[usize]) -> Vec<f64> {
        let mut total = vec![0.0; self.rows];
        for &i in selected {
            for (t, a) in total.iter_mut().zip(self.column(i)) {
                *t += a;
            }
        }
        total
    }

    /// `min_j (A x)_j` for a Boolean selection; `+inf` when there are no rows.
    pub fn min_coverage(&self, selected: &[usize]) -> f64 {
        self.coverage_of(selected)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Assembles `A(k)`; columns are computed in parallel and placed by candidate index.
pub fn build_coverage_matrix(
    world: &World,
    cands: &CandidateSet,
    inst: &RouteInstance,
    model: &SensorModel,
) -> Result<CoverageMatrix> {
    model.validate()?;
    let columns = cands
        .positions
        .par_iter()
        .map(|&g| coverage_column(world, g, inst, model))
        .collect::<Result<Vec<_>>>()?;
    CoverageMatrix::from_columns(inst.points.len(), columns, inst.step_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn open_world() -> World {
        World::new(Rect::from_coords(-20.0, -20.0, 20.0, 20.0), vec![]).unwrap()
    }

    fn instance(points: Vec<Point2>) -> RouteInstance {
        RouteInstance {
            step_index: 0,
            points,
        }
    }

    /// Best count over 3600 evenly spaced headings.
    fn brute_force_count(angles: &[f64], fov: f64) -> usize {
        (0..3600)
            .map(|i| {
                let h = -PI + TAU * i as f64 / 3600.0;
                count_in_window(angles, h, fov)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn visibility_examples() {
        let model = SensorModel::with_fov(360.0);
        let w = open_world();
        assert!(visible(
            &w,
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            &model
        ));
        let blocked = World::new(
            Rect::from_coords(-20.0, -20.0, 20.0, 20.0),
            vec![Rect::from_coords(2.0, 2.0, 4.0, 4.0)],
        )
        .unwrap();
        assert!(!visible(
            &blocked,
            Point2::new(0.0, 3.0),
            Point2::new(6.0, 3.0),
            &model
        ));
        let ranged = SensorModel {
            max_range: Some(5.0),
            ..model
        };
        assert!(!visible(
            &w,
            Point2::new(0.0, 0.0),
            Point2::new(5.0001, 0.0),
            &ranged
        ));
        assert!(visible(
            &w,
            Point2::new(0.0, 0.0),
            Point2::new(5.0, 0.0),
            &ranged
        ));
        // coincident guard and target
        assert!(visible(
            &w,
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 1.0),
            &ranged
        ));
    }

    #[test]
    fn best_heading_examples() {
        let angles = [deg(0.0), deg(10.0), deg(180.0)];
        let (_, count) = best_heading(&angles, deg(175.0));
        assert_eq!(count, 2);
        assert_eq!(count, brute_force_count(&angles, deg(175.0)));

        let (_, count) = best_heading(&[0.1, -3.0, 2.0, 1.0], TAU);
        assert_eq!(count, 4);

        let (h, count) = best_heading(&[0.0], deg(10.0));
        assert_eq!(count, 1);
        // smallest covering heading is -5 degrees; the window is [-10, 0]
        assert!((h - deg(-5.0)).abs() < 1e-12);
        assert!(in_window(0.0, h, deg(10.0)));

        assert_eq!(best_heading(&[], 1.0), (0.0, 0));
    }

    #[test]
    fn best_heading_handles_wraparound() {
        // cluster straddling +-pi
        let angles = [deg(170.0), deg(-170.0), deg(179.0), deg(0.0)];
        let (h, count) = best_heading(&angles, deg(30.0));
        assert_eq!(count, 3);
        for a in &angles[..3] {
            assert!(in_window(*a, h, deg(30.0)));
        }
    }

    #[test]
    fn full_fov_column_is_all_ones() {
        let inst = instance(vec![
            Point2::new(1.0, 0.0),
            Point2::new(-3.0, 2.0),
            Point2::new(0.0, -5.0),
        ]);
        let col = coverage_column(
            &open_world(),
            Point2::new(0.0, 0.0),
            &inst,
            &SensorModel::with_fov(360.0),
        )
        .unwrap();
        assert_eq!(col, vec![1.0; 3]);
    }

    #[test]
    fn occluded_guard_sees_nothing() {
        // guard inside a closed chamber of four walls
        let walls = vec![
            Rect::from_coords(-3.0, -3.0, 3.0, -2.0),
            Rect::from_coords(-3.0, 2.0, 3.0, 3.0),
            Rect::from_coords(-3.0, -3.0, -2.0, 3.0),
            Rect::from_coords(2.0, -3.0, 3.0, 3.0),
        ];
        let w = World::new(Rect::from_coords(-20.0, -20.0, 20.0, 20.0), walls).unwrap();
        let inst = instance(vec![Point2::new(10.0, 0.0), Point2::new(-10.0, 5.0)]);
        let col = coverage_column(
            &w,
            Point2::new(0.0, 0.0),
            &inst,
            &SensorModel::with_fov(360.0),
        )
        .unwrap();
        assert_eq!(col, vec![0.0, 0.0]);
    }

    #[test]
    fn collinear_targets_spanning_190_degrees() {
        // guard at the origin, targets on the line y = -0.5 far to the left,
        // straight up, and far to the right: bearings span about 190 degrees
        let g = Point2::new(0.0, 0.0);
        let t = [
            Point2::new(-10.0, -0.874),
            Point2::new(0.0, 5.0),
            Point2::new(10.0, -0.874),
        ];
        let span = normalize_angle(g.bearing_to(t[0]) - g.bearing_to(t[2])).abs();
        assert!((TAU - span - deg(190.0)).abs() < deg(0.1));
        let col = coverage_column(
            &open_world(),
            g,
            &instance(t.to_vec()),
            &SensorModel::with_fov(175.0),
        )
        .unwrap();
        assert_eq!(col.iter().filter(|&&v| v == 1.0).count(), 2);
        let bearings: Vec<f64> = t.iter().map(|p| g.bearing_to(*p)).collect();
        assert_eq!(brute_force_count(&bearings, deg(175.0)), 2);
    }

    #[test]
    fn linear_decay_requires_range() {
        let model = SensorModel {
            attenuation: Attenuation::LinearDecay,
            ..SensorModel::with_fov(360.0)
        };
        let inst = instance(vec![Point2::new(1.0, 0.0)]);
        assert!(coverage_column(&open_world(), Point2::new(0.0, 0.0), &inst, &model).is_err());

        let model = SensorModel {
            max_range: Some(4.0),
            ..model
        };
        let inst = instance(vec![
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 4.0),
            Point2::new(0.0, 5.0),
        ]);
        let col = coverage_column(&open_world(), Point2::new(0.0, 0.0), &inst, &model).unwrap();
        assert_eq!(col, vec![0.75, 0.0, 0.0]);
    }

    #[test]
    fn sensor_validation() {
        assert!(SensorModel::with_fov(0.0).validate().is_err());
        assert!(SensorModel::with_fov(360.5).validate().is_err());
        assert!(SensorModel::with_fov(360.0).validate().is_ok());
        let bad_range = SensorModel {
            max_range: Some(0.0),
            ..SensorModel::default()
        };
        assert!(bad_range.validate().is_err());
    }

    #[test]
    fn centroid_policy_points_at_mean() {
        // route points all to the east, one far west; centroid is east
        let inst = instance(vec![
            Point2::new(5.0, 0.0),
            Point2::new(5.0, 1.0),
            Point2::new(5.0, -1.0),
            Point2::new(-5.0, 0.0),
        ]);
        let model = SensorModel {
            heading_policy: HeadingPolicy::Centroid,
            ..SensorModel::with_fov(90.0)
        };
        let col = coverage_column(&open_world(), Point2::new(0.0, 0.0), &inst, &model).unwrap();
        assert_eq!(col, vec![1.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn matrix_layout_and_selection_helpers() {
        let a = CoverageMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap();
        assert_eq!((a.rows(), a.cols()), (2, 3));
        assert_eq!(a.column(1), &[1.0, 1.0]);
        assert_eq!(a.get(1, 2), 1.0);
        assert_eq!(a.coverage_of(&[0, 2]), vec![1.0, 1.0]);
        assert_eq!(a.min_coverage(&[0]), 0.0);
        assert!(CoverageMatrix::from_rows(&[vec![-1.0]]).is_err());
        assert!(CoverageMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
