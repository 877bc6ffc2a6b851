//! Planar primitives, rectangular obstacles and line-of-sight tests.
//!
//! Obstacles block sight only through their open interior: a segment that
//! runs along an edge or touches a corner is not blocked, and a point on an
//! obstacle boundary counts as free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack used when clipping a segment parameter interval against a slab.
const CLIP_EPS: f64 = 1e-12;

/// A point (or vector) in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Interpolates `self + (other - self) * s`.
    pub fn lerp(self, other: Point2, s: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * s,
            self.y + (other.y - self.y) * s,
        )
    }

    /// Bearing of `target` seen from `self`, in `[-pi, pi)`.
    ///
    /// Coincident points have bearing 0.
    pub fn bearing_to(self, target: Point2) -> f64 {
        let dx = target.x - self.x;
        let dy = target.y - self.y;
        if dx == 0.0 && dy == 0.0 {
            return 0.0;
        }
        normalize_angle(dy.atan2(dx))
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Euclidean distance.
pub fn distance(a: Point2, b: Point2) -> f64 {
    (b.x - a.x).hypot(b.y - a.y)
}

/// Wraps an angle into `[-pi, pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = (theta + PI).rem_euclid(TAU) - PI;
    // rem_euclid can return TAU itself for tiny negative inputs
    if a >= PI {
        a -= TAU;
    }
    a
}

/// Axis-aligned rectangle with strictly positive width and height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::invalid("rect", "corners must be finite"));
        }
        if min.x >= max.x || min.y >= max.y {
            return Err(Error::invalid(
                "rect",
                format!(
                    "min corner ({}, {}) must be strictly below max corner ({}, {})",
                    min.x, min.y, max.x, max.y
                ),
            ));
        }
        Ok(Self { min, max })
    }

    /// Shorthand for `Rect::new((x0, y0), (x1, y1))`; panics on invalid input.
    pub fn from_coords(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::new(Point2::new(x0, y0), Point2::new(x1, y1)).expect("valid rectangle")
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Closed containment.
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Strict containment in the open interior.
    pub fn interior_contains(&self, p: Point2) -> bool {
        p.x > self.min.x && p.x < self.max.x && p.y > self.min.y && p.y < self.max.y
    }

    /// Whether the open segment `(a, b)` passes through the open interior.
    ///
    /// Slab clipping: on each axis the parameters where the segment is
    /// strictly between the two slab planes form an open interval; the
    /// segment enters the interior iff the intersection of those intervals
    /// with `(0, 1)` has positive length.
    pub fn segment_crosses_interior(&self, a: Point2, b: Point2) -> bool {
        if a == b {
            return false;
        }
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        for (start, delta, min, max) in [
            (a.x, b.x - a.x, self.min.x, self.max.x),
            (a.y, b.y - a.y, self.min.y, self.max.y),
        ] {
            if delta == 0.0 {
                if start <= min || start >= max {
                    return false;
                }
                continue;
            }
            let mut s0 = (min - start) / delta;
            let mut s1 = (max - start) / delta;
            if s0 > s1 {
                std::mem::swap(&mut s0, &mut s1);
            }
            lo = lo.max(s0);
            hi = hi.min(s1);
            if hi - lo <= CLIP_EPS {
                return false;
            }
        }
        hi - lo > CLIP_EPS
    }

    fn intersects_closed(&self, other: &Rect) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }
}

/// Workspace bounds plus rectangular obstacles (union semantics; overlaps allowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct World {
    pub bounds: Rect,
    pub obstacles: Vec<Rect>,
}

impl World {
    pub fn new(bounds: Rect, obstacles: Vec<Rect>) -> Result<Self> {
        let world = Self { bounds, obstacles };
        world.validate()?;
        Ok(world)
    }

    /// Checks that every obstacle meets the bounds and that the free region
    /// is not empty.
    pub fn validate(&self) -> Result<()> {
        for (i, obs) in self.obstacles.iter().enumerate() {
            if !obs.min.is_finite()
                || !obs.max.is_finite()
                || obs.min.x >= obs.max.x
                || obs.min.y >= obs.max.y
            {
                return Err(Error::invalid(
                    format!("obstacles[{i}]"),
                    "zero-area or non-finite rectangle",
                ));
            }
            if !obs.intersects_closed(&self.bounds) {
                return Err(Error::invalid(
                    format!("obstacles[{i}]"),
                    "does not intersect the world bounds",
                ));
            }
        }
        if !self.has_free_space() {
            return Err(Error::invalid("obstacles", "obstacles leave no free space"));
        }
        Ok(())
    }

    /// Whether some point of the bounds is outside every open obstacle interior.
    ///
    /// Any free point can be slid to a vertex of the arrangement formed by the
    /// bounds and obstacle edges, so checking those vertices is exhaustive.
    fn has_free_space(&self) -> bool {
        let mut xs = vec![self.bounds.min.x, self.bounds.max.x];
        let mut ys = vec![self.bounds.min.y, self.bounds.max.y];
        for o in &self.obstacles {
            xs.extend([o.min.x, o.max.x]);
            ys.extend([o.min.y, o.max.y]);
        }
        xs.retain(|x| *x >= self.bounds.min.x && *x <= self.bounds.max.x);
        ys.retain(|y| *y >= self.bounds.min.y && *y <= self.bounds.max.y);
        xs.iter().any(|&x| {
            ys.iter()
                .any(|&y| self.point_in_free_space(Point2::new(x, y)))
        })
    }

    /// True iff `p` lies within the bounds and outside every open obstacle interior.
    pub fn point_in_free_space(&self, p: Point2) -> bool {
        self.bounds.contains(p) && !self.obstacles.iter().any(|o| o.interior_contains(p))
    }

    /// True iff the open segment `(a, b)` crosses the open interior of an obstacle.
    pub fn segment_blocked(&self, a: Point2, b: Point2) -> bool {
        self.obstacles
            .iter()
            .any(|o| o.segment_crosses_interior(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn block_world() -> World {
        World::new(
            Rect::from_coords(0.0, 0.0, 10.0, 10.0),
            vec![Rect::from_coords(2.0, 2.0, 4.0, 4.0)],
        )
        .unwrap()
    }

    #[test]
    fn free_space_examples() {
        let w = block_world();
        assert!(w.point_in_free_space(Point2::new(1.0, 1.0)));
        assert!(!w.point_in_free_space(Point2::new(3.0, 3.0)));
        assert!(w.point_in_free_space(Point2::new(2.0, 3.0)));
        assert!(!w.point_in_free_space(Point2::new(-0.1, 3.0)));
        assert!(w.point_in_free_space(Point2::new(10.0, 10.0)));
    }

    #[test]
    fn blocking_examples() {
        let w = block_world();
        assert!(w.segment_blocked(Point2::new(0.0, 3.0), Point2::new(6.0, 3.0)));
        assert!(!w.segment_blocked(Point2::new(0.0, 5.0), Point2::new(6.0, 5.0)));
        assert!(!w.segment_blocked(Point2::new(0.0, 2.0), Point2::new(6.0, 2.0)));
    }

    #[test]
    fn corner_graze_does_not_block() {
        let w = block_world();
        // diagonal through the corner (4,2) only
        assert!(!w.segment_blocked(Point2::new(2.0, 0.0), Point2::new(6.0, 4.0)));
        // diagonal through the whole box
        assert!(w.segment_blocked(Point2::new(1.0, 1.0), Point2::new(5.0, 5.0)));
        // endpoint resting on an edge, pointing away
        assert!(!w.segment_blocked(Point2::new(4.0, 3.0), Point2::new(8.0, 3.0)));
        // endpoint on an edge, pointing into the box
        assert!(w.segment_blocked(Point2::new(4.0, 3.0), Point2::new(3.0, 3.0)));
        // segment ending before the box
        assert!(!w.segment_blocked(Point2::new(0.0, 3.0), Point2::new(1.9, 3.0)));
        // degenerate segment
        assert!(!w.segment_blocked(Point2::new(3.0, 3.0), Point2::new(3.0, 3.0)));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Point2::new(0.0, 0.0), Point2::new(3.0, 4.0)), 5.0);
        assert_eq!(distance(Point2::new(1.0, 1.0), Point2::new(1.0, 1.0)), 0.0);
        let d = distance(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_rectangles() {
        assert!(Rect::new(Point2::new(1.0, 1.0), Point2::new(1.0, 2.0)).is_err());
        assert!(Rect::new(Point2::new(1.0, 1.0), Point2::new(0.0, 2.0)).is_err());
    }

    #[test]
    fn rejects_worlds_without_free_space() {
        let bounds = Rect::from_coords(0.0, 0.0, 10.0, 10.0);
        assert!(World::new(bounds, vec![Rect::from_coords(-1.0, -1.0, 11.0, 11.0)]).is_err());
        // two halves that touch still cover every interior point, but the
        // shared edge x = 5 and the bounds' border are boundary points and stay free
        let halves = vec![
            Rect::from_coords(0.0, 0.0, 5.0, 10.0),
            Rect::from_coords(5.0, 0.0, 10.0, 10.0),
        ];
        assert!(World::new(bounds, halves).is_ok());
        // strictly enclosing obstacles union leaving nothing free
        let cover = vec![
            Rect::from_coords(-1.0, -1.0, 6.0, 11.0),
            Rect::from_coords(4.0, -1.0, 11.0, 11.0),
        ];
        assert!(World::new(bounds, cover).is_err());
        // obstacle entirely outside the bounds
        assert!(World::new(bounds, vec![Rect::from_coords(20.0, 20.0, 21.0, 21.0)]).is_err());
    }

    #[test]
    fn normalize_angle_range() {
        use std::f64::consts::PI;
        assert_eq!(normalize_angle(PI), -PI);
        assert_eq!(normalize_angle(-PI), -PI);
        assert!((normalize_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!(normalize_angle(-1e-18) < PI);
    }

    fn arb_point() -> impl Strategy<Value = Point2> {
        (-2.0..12.0f64, -2.0..12.0f64).prop_map(|(x, y)| Point2::new(x, y))
    }

    fn arb_world() -> impl Strategy<Value = World> {
        prop::collection::vec((0.0..9.0f64, 0.0..9.0f64, 0.2..4.0f64, 0.2..4.0f64), 0..5).prop_map(
            |boxes| World {
                bounds: Rect::from_coords(0.0, 0.0, 10.0, 10.0),
                obstacles: boxes
                    .into_iter()
                    .map(|(x, y, w, h)| {
                        Rect::from_coords(x, y, (x + w).min(10.0), (y + h).min(10.0))
                    })
                    .collect(),
            },
        )
    }

    proptest! {
        #[test]
        fn blocking_is_symmetric(w in arb_world(), a in arb_point(), b in arb_point()) {
            prop_assert_eq!(w.segment_blocked(a, b), w.segment_blocked(b, a));
        }

        #[test]
        fn unblocked_segments_avoid_interiors(w in arb_world(), a in arb_point(), b in arb_point()) {
            if !w.segment_blocked(a, b) {
                for i in 0..1000 {
                    let p = a.lerp(b, i as f64 / 999.0);
                    for o in &w.obstacles {
                        let strictly_inside = p.x > o.min.x + 1e-9 && p.x < o.max.x - 1e-9
                            && p.y > o.min.y + 1e-9 && p.y < o.max.y - 1e-9;
                        prop_assert!(!strictly_inside);
                    }
                }
            }
        }

        #[test]
        fn removing_obstacles_keeps_free_points_free(w in arb_world(), p in arb_point(), drop in 0usize..5) {
            if w.point_in_free_space(p) && drop < w.obstacles.len() {
                let mut fewer = w.clone();
                fewer.obstacles.remove(drop);
                prop_assert!(fewer.point_in_free_space(p));
            }
        }
    }
}
