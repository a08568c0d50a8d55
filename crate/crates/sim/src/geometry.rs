//! Planar geometry primitives: points, segments, ray casts and circle tests.

use serde::{Deserialize, Serialize};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Normalise an angle into `[-pi, pi)`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(TWO_PI);
    if r >= std::f64::consts::PI {
        r -= TWO_PI;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(&self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

/// A wall segment. Robots collide with these; rays are cast against them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    /// Closest distance from `p` to this segment.
    pub fn distance_to_point(&self, p: Point) -> f64 {
        self.closest_point(p).distance(p)
    }

    pub fn closest_point(&self, p: Point) -> Point {
        let dx = self.b.x - self.a.x;
        let dy = self.b.y - self.a.y;
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return self.a;
        }
        let t = ((p.x - self.a.x) * dx + (p.y - self.a.y) * dy) / len2;
        let t = t.clamp(0.0, 1.0);
        Point::new(self.a.x + t * dx, self.a.y + t * dy)
    }
}

/// Distance along a ray from `origin` in direction `theta` to the first hit on
/// `seg`, if any.
pub fn ray_segment_intersection(origin: Point, theta: f64, seg: &Segment) -> Option<f64> {
    let (dx, dy) = (theta.cos(), theta.sin());
    let (ex, ey) = (seg.b.x - seg.a.x, seg.b.y - seg.a.y);
    let denom = dx * ey - dy * ex;
    if denom.abs() < 1e-15 {
        return None;
    }
    let (ox, oy) = (seg.a.x - origin.x, seg.a.y - origin.y);
    let t = (ox * ey - oy * ex) / denom;
    let u = (ox * dy - oy * dx) / denom;
    if t >= 0.0 && (0.0..=1.0).contains(&u) {
        Some(t)
    } else {
        None
    }
}

/// Distance along a ray to the first intersection with a circle, if any.
pub fn ray_circle_intersection(origin: Point, theta: f64, centre: Point, radius: f64) -> Option<f64> {
    let (dx, dy) = (theta.cos(), theta.sin());
    let (ox, oy) = (origin.x - centre.x, origin.y - centre.y);
    let b = ox * dx + oy * dy;
    let c = ox * ox + oy * oy - radius * radius;
    let disc = b * b - c;
    if disc < 0.0 {
        return None;
    }
    let sqrt_disc = disc.sqrt();
    let t1 = -b - sqrt_disc;
    let t2 = -b + sqrt_disc;
    if t1 >= 0.0 {
        Some(t1)
    } else if t2 >= 0.0 {
        Some(t2)
    } else {
        None
    }
}

/// True when the open segment between `a` and `b` passes through the circle.
/// Endpoints sitting exactly on the circle do not count as blocking.
pub fn segment_intersects_circle(a: Point, b: Point, centre: Point, radius: f64) -> bool {
    let seg = Segment::new(a, b);
    let closest = seg.closest_point(centre);
    let d = closest.distance(centre);
    if d >= radius {
        return false;
    }
    // Require the crossing to be strictly interior so that the target's own
    // surface (range measured to its centre) is not treated as an occluder.
    let t_len = a.distance(b);
    if t_len < 1e-12 {
        return false;
    }
    let t = ((closest.x - a.x) * (b.x - a.x) + (closest.y - a.y) * (b.y - a.y)) / (t_len * t_len);
    t > 1e-9 && t < 1.0 - 1e-9
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalize_wraps_to_half_open_interval() {
        assert_eq!(normalize_angle(PI), -PI);
        assert!((normalize_angle(-PI) + PI).abs() < 1e-12);
        assert!((normalize_angle(3.0 * PI) + PI).abs() < 1e-12);
        assert!((normalize_angle(0.5) - 0.5).abs() < 1e-12);
        assert!((normalize_angle(-0.5) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn ray_hits_wall_straight_ahead() {
        let wall = Segment::new(Point::new(0.5, -1.0), Point::new(0.5, 1.0));
        let d = ray_segment_intersection(Point::new(0.0, 0.0), 0.0, &wall).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        assert!(ray_segment_intersection(Point::new(0.0, 0.0), PI, &wall).is_none());
    }

    #[test]
    fn ray_hits_circle() {
        let d = ray_circle_intersection(Point::new(0.0, 0.0), 0.0, Point::new(1.0, 0.0), 0.25)
            .unwrap();
        assert!((d - 0.75).abs() < 1e-12);
        assert!(ray_circle_intersection(Point::new(0.0, 0.0), PI, Point::new(1.0, 0.0), 0.25)
            .is_none());
    }

    #[test]
    fn occlusion_test_is_strictly_interior() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert!(segment_intersects_circle(a, b, Point::new(0.5, 0.0), 0.05));
        assert!(!segment_intersects_circle(a, b, Point::new(0.5, 0.2), 0.05));
        // Circle centred on an endpoint: not an occluder.
        assert!(!segment_intersects_circle(a, b, b, 0.05));
    }
}
