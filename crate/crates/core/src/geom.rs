//! 2D geometry: vectors, angles, polylines with arc-length parameterization,
//! polygons, and oriented rectangles (agent footprints).

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

/// 2D point or vector in meters. Serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2 { x: a[0], y: a[1] }
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counter-clockwise rotation by `angle` radians.
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Left-hand unit normal of a unit direction vector.
    pub fn left_normal(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            Vec2::ZERO
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

/// Normalize an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Wrapped difference `a - b` in `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// Closest point to `p` on segment `ab`.
pub fn closest_on_segment(a: Vec2, b: Vec2, p: Vec2) -> Vec2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let u = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a + ab * u
}

pub fn segment_point_dist(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    closest_on_segment(a, b, p).dist(p)
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Whether segments `a1a2` and `b1b2` intersect (including touching).
pub fn segments_intersect(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(b1, b2, a1))
        || (d2 == 0.0 && on_segment(b1, b2, a2))
        || (d3 == 0.0 && on_segment(a1, a2, b1))
        || (d4 == 0.0 && on_segment(a1, a2, b2))
}

/// Minimum distance between two segments; 0 if they intersect.
pub fn segment_segment_dist(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> f64 {
    if segments_intersect(a1, a2, b1, b2) {
        return 0.0;
    }
    segment_point_dist(a1, a2, b1)
        .min(segment_point_dist(a1, a2, b2))
        .min(segment_point_dist(b1, b2, a1))
        .min(segment_point_dist(b1, b2, a2))
}

/// Result of projecting a point onto a polyline.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    /// Arc-length coordinate of the closest point.
    pub s: f64,
    /// Signed lateral offset (positive to the left of travel direction).
    pub lateral: f64,
    /// Unsigned distance to the polyline.
    pub dist: f64,
    /// Closest point on the polyline.
    pub point: Vec2,
    /// Tangent angle of the polyline at the closest point.
    pub tangent: f64,
}

/// Polyline with precomputed cumulative arc lengths.
#[derive(Debug, Clone)]
pub struct ArcPolyline {
    pts: Vec<Vec2>,
    cum: Vec<f64>,
}

impl ArcPolyline {
    /// Requires at least 2 points.
    pub fn new(pts: &[Vec2]) -> Self {
        assert!(pts.len() >= 2, "polyline needs at least 2 points");
        let mut cum = Vec::with_capacity(pts.len());
        let mut s = 0.0;
        cum.push(0.0);
        for w in pts.windows(2) {
            s += w[0].dist(w[1]);
            cum.push(s);
        }
        ArcPolyline {
            pts: pts.to_vec(),
            cum,
        }
    }

    pub fn total_len(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.pts
    }

    fn segment_dir(&self, i: usize) -> Vec2 {
        (self.pts[i + 1] - self.pts[i]).normalized()
    }

    /// Point and tangent at arc-length `s`. Values outside `[0, len]`
    /// extrapolate linearly along the end segments.
    pub fn point_at(&self, s: f64) -> (Vec2, f64) {
        let n = self.pts.len();
        if s <= 0.0 {
            let d = self.segment_dir(0);
            return (self.pts[0] + d * s, d.angle());
        }
        if s >= self.total_len() {
            let d = self.segment_dir(n - 2);
            return (self.pts[n - 1] + d * (s - self.total_len()), d.angle());
        }
        // binary search for the containing segment
        let i = match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        };
        let d = self.segment_dir(i);
        (self.pts[i] + d * (s - self.cum[i]), d.angle())
    }

    /// Project `p` onto the polyline (clamped to its extent).
    pub fn project(&self, p: Vec2) -> Projection {
        self.project_impl(p, false)
    }

    /// Project `p`, extrapolating the arc coordinate beyond the endpoints
    /// along the end segments (used for route-frame measurements).
    pub fn project_extended(&self, p: Vec2) -> Projection {
        self.project_impl(p, true)
    }

    fn project_impl(&self, p: Vec2, extend: bool) -> Projection {
        let mut best = (f64::INFINITY, 0usize, Vec2::ZERO);
        for i in 0..self.pts.len() - 1 {
            let c = closest_on_segment(self.pts[i], self.pts[i + 1], p);
            let d2 = (p - c).norm_sq();
            if d2 < best.0 {
                best = (d2, i, c);
            }
        }
        let (_, i, mut point) = best;
        let dir = self.segment_dir(i);
        let mut s = self.cum[i] + (point - self.pts[i]).dot(dir);
        if extend {
            // unclamped parameter on the boundary segments
            let first = (p - self.pts[0]).dot(self.segment_dir(0));
            if i == 0 && first < 0.0 {
                s = first;
                point = self.pts[0] + self.segment_dir(0) * first;
            }
            let n = self.pts.len();
            let last_dir = self.segment_dir(n - 2);
            let beyond = (p - self.pts[n - 1]).dot(last_dir);
            if i == n - 2 && beyond > 0.0 {
                s = self.total_len() + beyond;
                point = self.pts[n - 1] + last_dir * beyond;
            }
        }
        let lateral = dir.cross(p - point);
        Projection {
            s,
            lateral,
            dist: p.dist(point),
            point,
            tangent: dir.angle(),
        }
    }

    /// Laterally offset copy (positive to the left). Uses averaged vertex
    /// normals, adequate for the gentle curvatures produced by the scene
    /// generator.
    pub fn offset(&self, lateral: f64) -> Vec<Vec2> {
        let n = self.pts.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let t_in = if i > 0 {
                (self.pts[i] - self.pts[i - 1]).normalized()
            } else {
                self.segment_dir(0)
            };
            let t_out = if i + 1 < n {
                (self.pts[i + 1] - self.pts[i]).normalized()
            } else {
                self.segment_dir(n - 2)
            };
            let nrm = (t_in + t_out).normalized().left_normal();
            out.push(self.pts[i] + nrm * lateral);
        }
        out
    }
}

/// Oriented rectangle (vehicle/pedestrian footprint).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obb {
    pub center: Vec2,
    pub heading: f64,
    pub half_len: f64,
    pub half_wid: f64,
}

impl Obb {
    pub fn corners(&self) -> [Vec2; 4] {
        let (s, c) = self.heading.sin_cos();
        let fwd = Vec2::new(c, s) * self.half_len;
        let left = Vec2::new(-s, c) * self.half_wid;
        [
            self.center + fwd + left,
            self.center + fwd - left,
            self.center - fwd - left,
            self.center - fwd + left,
        ]
    }

    /// Separating-axis overlap test (touching counts as overlap).
    pub fn intersects(&self, other: &Obb) -> bool {
        let ca = self.corners();
        let cb = other.corners();
        for (s, c) in [self.heading.sin_cos(), other.heading.sin_cos()] {
            for axis in [Vec2::new(c, s), Vec2::new(-s, c)] {
                let pa = project_extent(&ca, axis);
                let pb = project_extent(&cb, axis);
                if pa.1 < pb.0 || pb.1 < pa.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Euclidean separation distance between two footprints; 0 when they
    /// overlap or touch.
    pub fn distance(&self, other: &Obb) -> f64 {
        if self.intersects(other) {
            return 0.0;
        }
        let ca = self.corners();
        let cb = other.corners();
        let mut best = f64::INFINITY;
        for i in 0..4 {
            let (a1, a2) = (ca[i], ca[(i + 1) % 4]);
            for j in 0..4 {
                let (b1, b2) = (cb[j], cb[(j + 1) % 4]);
                best = best.min(segment_segment_dist(a1, a2, b1, b2));
            }
        }
        best
    }

    /// Radius of the circumscribed disc.
    pub fn circumradius(&self) -> f64 {
        self.half_len.hypot(self.half_wid)
    }
}

fn project_extent(corners: &[Vec2; 4], axis: Vec2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in corners {
        let v = c.dot(axis);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(poly: &[Vec2], p: Vec2) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to the polygon boundary.
pub fn polygon_boundary_dist(poly: &[Vec2], p: Vec2) -> f64 {
    let n = poly.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(segment_point_dist(poly[i], poly[(i + 1) % n], p));
    }
    best
}

/// Signed distance to the polygon: positive inside, negative outside.
pub fn polygon_signed_dist(poly: &[Vec2], p: Vec2) -> f64 {
    let d = polygon_boundary_dist(poly, p);
    if point_in_polygon(poly, p) {
        d
    } else {
        -d
    }
}

/// Signed distance to a union of polygons (max over members), `None` when
/// the union is empty.
pub fn polygons_signed_dist(polys: &[Vec<Vec2>], p: Vec2) -> Option<f64> {
    polys
        .iter()
        .map(|poly| polygon_signed_dist(poly, p))
        .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.max(d))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn wrap_angle_range() {
        approx(wrap_angle(0.0), 0.0, 0.0);
        approx(wrap_angle(PI), PI, 0.0);
        approx(wrap_angle(-PI), PI, 1e-12);
        approx(wrap_angle(3.0 * PI), PI, 1e-12);
        approx(wrap_angle(TAU + 0.25), 0.25, 1e-12);
        approx(wrap_angle(-0.25), -0.25, 1e-12);
    }

    #[test]
    fn projection_straight_line() {
        let pl = ArcPolyline::new(&[Vec2::new(0.0, 0.0), Vec2::new(10.0, 0.0)]);
        let p = pl.project(Vec2::new(3.0, 2.0));
        approx(p.s, 3.0, 1e-12);
        approx(p.lateral, 2.0, 1e-12);
        approx(p.dist, 2.0, 1e-12);
        approx(p.tangent, 0.0, 1e-12);

        let q = pl.project(Vec2::new(3.0, -1.5));
        approx(q.lateral, -1.5, 1e-12);
    }

    #[test]
    fn projection_extends_past_ends() {
        let pl = ArcPolyline::new(&[Vec2::new(0.0, 0.0), Vec2::new(10.0, 0.0)]);
        let p = pl.project_extended(Vec2::new(12.0, 1.0));
        approx(p.s, 12.0, 1e-12);
        approx(p.lateral, 1.0, 1e-12);
        let q = pl.project_extended(Vec2::new(-2.0, 0.0));
        approx(q.s, -2.0, 1e-12);
        // clamped version stays within [0, len]
        let r = pl.project(Vec2::new(12.0, 1.0));
        approx(r.s, 10.0, 1e-12);
    }

    #[test]
    fn point_at_interpolates_and_extrapolates() {
        let pl = ArcPolyline::new(&[
            Vec2::new(0.0, 0.0),
            Vec2::new(4.0, 0.0),
            Vec2::new(4.0, 4.0),
        ]);
        let (p, t) = pl.point_at(2.0);
        approx(p.x, 2.0, 1e-12);
        approx(t, 0.0, 1e-12);
        let (p, t) = pl.point_at(6.0);
        approx(p.x, 4.0, 1e-12);
        approx(p.y, 2.0, 1e-12);
        approx(t, PI / 2.0, 1e-12);
        let (p, _) = pl.point_at(10.0);
        approx(p.y, 6.0, 1e-12);
    }

    #[test]
    fn obb_distance_axis_aligned() {
        let a = Obb {
            center: Vec2::ZERO,
            heading: 0.0,
            half_len: 2.0,
            half_wid: 1.0,
        };
        let b = Obb {
            center: Vec2::new(10.0, 0.0),
            heading: 0.0,
            half_len: 2.0,
            half_wid: 1.0,
        };
        approx(a.distance(&b), 6.0, 1e-12);
        assert_eq!(a.distance(&a), 0.0);
        // rotated by 90 degrees: gap shrinks by half_len - half_wid
        let c = Obb {
            heading: PI / 2.0,
            ..b
        };
        approx(a.distance(&c), 7.0, 1e-9);
    }

    #[test]
    fn obb_overlap_detection() {
        let a = Obb {
            center: Vec2::ZERO,
            heading: 0.0,
            half_len: 2.0,
            half_wid: 1.0,
        };
        let b = Obb {
            center: Vec2::new(3.0, 0.0),
            heading: 0.0,
            half_len: 2.0,
            half_wid: 1.0,
        };
        assert!(a.intersects(&b));
        assert_eq!(a.distance(&b), 0.0);
        // diagonal separation
        let d = Obb {
            center: Vec2::new(5.0, 5.0),
            heading: PI / 4.0,
            half_len: 1.0,
            half_wid: 1.0,
        };
        assert!(!a.intersects(&d));
        assert!(a.distance(&d) > 0.0);
    }

    #[test]
    fn polygon_signed_distance() {
        let square = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(10.0, 0.0),
            Vec2::new(10.0, 10.0),
            Vec2::new(0.0, 10.0),
        ];
        approx(polygon_signed_dist(&square, Vec2::new(5.0, 5.0)), 5.0, 1e-12);
        approx(polygon_signed_dist(&square, Vec2::new(5.0, 1.0)), 1.0, 1e-12);
        approx(
            polygon_signed_dist(&square, Vec2::new(5.0, -2.0)),
            -2.0,
            1e-12,
        );
        assert!(point_in_polygon(&square, Vec2::new(9.9, 9.9)));
        assert!(!point_in_polygon(&square, Vec2::new(10.1, 5.0)));
    }

    #[test]
    fn offset_shifts_left() {
        let pl = ArcPolyline::new(&[Vec2::new(0.0, 0.0), Vec2::new(10.0, 0.0)]);
        let off = pl.offset(3.5);
        approx(off[0].y, 3.5, 1e-12);
        approx(off[1].y, 3.5, 1e-12);
    }

    #[test]
    fn segment_distance_cases() {
        let d = segment_segment_dist(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 2.0),
            Vec2::new(1.0, 2.0),
        );
        approx(d, 2.0, 1e-12);
        let crossing = segment_segment_dist(
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(1.0, -1.0),
        );
        assert_eq!(crossing, 0.0);
    }
}
