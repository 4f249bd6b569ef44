//! 2D geometric primitives: vectors, oriented rectangles, separating-axis
//! overlap tests, and point/segment distance queries.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive when `o` is to the left of `self`.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n > 0.0 {
            Vec2::new(self.x / n, self.y / n)
        } else {
            Vec2::ZERO
        }
    }

    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_angle(theta: f64) -> Vec2 {
        Vec2::new(theta.cos(), theta.sin())
    }

    /// Rotate by `theta` radians counterclockwise.
    pub fn rotated(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Wrap an angle to (-pi, pi].
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut a = theta % two_pi;
    if a <= -std::f64::consts::PI {
        a += two_pi;
    } else if a > std::f64::consts::PI {
        a -= two_pi;
    }
    a
}

/// Minimal signed angular difference a - b on the unit circle, in (-pi, pi].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// Oriented rectangle (vehicle footprint): center, heading, full length along
/// the heading axis, full width across it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedRect {
    pub center: Vec2,
    pub heading: f64,
    pub length: f64,
    pub width: f64,
}

impl OrientedRect {
    pub fn new(center: Vec2, heading: f64, length: f64, width: f64) -> Self {
        OrientedRect {
            center,
            heading,
            length,
            width,
        }
    }

    pub fn corners(&self) -> [Vec2; 4] {
        let fwd = Vec2::from_angle(self.heading) * (self.length * 0.5);
        let side = Vec2::from_angle(self.heading).perp() * (self.width * 0.5);
        [
            self.center + fwd + side,
            self.center + fwd - side,
            self.center - fwd - side,
            self.center - fwd + side,
        ]
    }

    fn axes(&self) -> [Vec2; 2] {
        let f = Vec2::from_angle(self.heading);
        [f, f.perp()]
    }

    fn project(&self, axis: Vec2) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in self.corners() {
            let p = c.dot(axis);
            lo = lo.min(p);
            hi = hi.max(p);
        }
        (lo, hi)
    }
}

/// Separating-axis overlap test for two oriented rectangles. Touching at a
/// shared edge or corner does not count as overlap.
pub fn rects_overlap(a: &OrientedRect, b: &OrientedRect) -> bool {
    for axis in a.axes().into_iter().chain(b.axes()) {
        let (alo, ahi) = a.project(axis);
        let (blo, bhi) = b.project(axis);
        if ahi <= blo || bhi <= alo {
            return false;
        }
    }
    true
}

/// Distance from point `p` to segment [a, b].
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

fn segment_segment_distance(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> f64 {
    if segments_intersect(a1, a2, b1, b2) {
        return 0.0;
    }
    point_segment_distance(a1, b1, b2)
        .min(point_segment_distance(a2, b1, b2))
        .min(point_segment_distance(b1, a1, a2))
        .min(point_segment_distance(b2, a1, a2))
}

fn segments_intersect(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> bool {
    let d1 = (a2 - a1).cross(b1 - a1);
    let d2 = (a2 - a1).cross(b2 - a1);
    let d3 = (b2 - b1).cross(a1 - b1);
    let d4 = (b2 - b1).cross(a2 - b1);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn point_in_rect(p: Vec2, r: &OrientedRect) -> bool {
    let d = (p - r.center).rotated(-r.heading);
    d.x.abs() <= r.length * 0.5 && d.y.abs() <= r.width * 0.5
}

/// Signed distance between two oriented rectangles: positive separation when
/// disjoint (exact, via pairwise segment distances), negative penetration
/// depth when overlapping (approximated by support sampling over 64 axes).
pub fn rect_signed_distance(a: &OrientedRect, b: &OrientedRect) -> f64 {
    if rects_overlap(a, b) || point_in_rect(a.center, b) || point_in_rect(b.center, a) {
        return -penetration_depth(a, b);
    }
    let ca = a.corners();
    let cb = b.corners();
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in 0..4 {
            let d = segment_segment_distance(ca[i], ca[(i + 1) % 4], cb[j], cb[(j + 1) % 4]);
            best = best.min(d);
        }
    }
    best
}

/// Penetration depth of two overlapping rectangles, estimated as the minimum
/// translation distance over 64 sampled directions.
fn penetration_depth(a: &OrientedRect, b: &OrientedRect) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..64 {
        let axis = Vec2::from_angle(k as f64 * std::f64::consts::PI / 64.0);
        let (alo, ahi) = a.project(axis);
        let (blo, bhi) = b.project(axis);
        let overlap = (ahi - blo).min(bhi - alo);
        if overlap < best {
            best = overlap;
        }
    }
    best.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wrap_angle_range() {
        assert_relative_eq!(wrap_angle(3.0 * std::f64::consts::PI), std::f64::consts::PI);
        assert_relative_eq!(wrap_angle(-std::f64::consts::PI), std::f64::consts::PI);
        assert_relative_eq!(wrap_angle(0.1), 0.1);
    }

    #[test]
    fn angle_diff_minimal() {
        // 3.1 to -3.1 crosses the wrap: minimal difference is 2*pi - 6.2
        let d = angle_diff(-3.1, 3.1);
        assert_relative_eq!(d, std::f64::consts::TAU - 6.2, epsilon = 1e-12);
    }

    #[test]
    fn far_rects_do_not_overlap() {
        let a = OrientedRect::new(Vec2::ZERO, 0.0, 4.5, 2.0);
        let b = OrientedRect::new(Vec2::new(10.0, 0.0), 0.0, 4.5, 2.0);
        assert!(!rects_overlap(&a, &b));
        assert!(rect_signed_distance(&a, &b) > 0.0);
        assert_relative_eq!(rect_signed_distance(&a, &b), 10.0 - 4.5, epsilon = 1e-9);
    }

    #[test]
    fn identical_rects_overlap() {
        let a = OrientedRect::new(Vec2::ZERO, 0.3, 4.5, 2.0);
        assert!(rects_overlap(&a, &a));
        assert!(rect_signed_distance(&a, &a) < 0.0);
    }

    #[test]
    fn small_corner_overlap_detected() {
        let a = OrientedRect::new(Vec2::ZERO, 0.0, 4.0, 2.0);
        let b = OrientedRect::new(Vec2::new(3.9, 1.9), 0.0, 4.0, 2.0);
        assert!(rects_overlap(&a, &b));
    }

    #[test]
    fn point_segment_distance_cases() {
        let a = Vec2::new(0.0, 0.0);
        let b = Vec2::new(10.0, 0.0);
        assert_relative_eq!(point_segment_distance(Vec2::new(5.0, 3.0), a, b), 3.0);
        assert_relative_eq!(point_segment_distance(Vec2::new(-4.0, 3.0), a, b), 5.0);
    }

    #[test]
    fn rotation_roundtrip() {
        let v = Vec2::new(1.0, 2.0);
        let w = v.rotated(0.7).rotated(-0.7);
        assert_relative_eq!(v.x, w.x, epsilon = 1e-12);
        assert_relative_eq!(v.y, w.y, epsilon = 1e-12);
    }
}
