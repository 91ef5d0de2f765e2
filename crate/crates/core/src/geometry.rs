//! Planar primitives shared by every stage of the pipeline.
//!
//! Points are in meters in a right-handed world frame. Headings are radians,
//! counterclockwise from +x. A positive lateral offset `d` means the point lies
//! to the left of the direction of travel.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A 2D point or vector in meters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2::new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector pointing along `heading`.
    pub fn from_heading(heading: f64) -> Self {
        let (s, c) = heading.sin_cos();
        Vec2::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Left-hand perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn heading(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
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

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// A position with a heading.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose2 {
    pub position: Vec2,
    pub heading: f64,
}

impl Pose2 {
    pub fn new(position: Vec2, heading: f64) -> Self {
        Pose2 { position, heading }
    }

    /// Maps a body-frame point into the world frame.
    pub fn to_world(&self, p: Vec2) -> Vec2 {
        self.position + p.rotate(self.heading)
    }

    /// Maps a world-frame point into the body frame.
    pub fn to_local(&self, p: Vec2) -> Vec2 {
        (p - self.position).rotate(-self.heading)
    }
}

/// Path-relative coordinates of a pose.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrenetPose {
    pub s: f64,
    pub d: f64,
    pub heading_offset: f64,
}

/// Foot point of a projection onto a polyline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub s: f64,
    pub d: f64,
    /// Heading of the segment the foot point lies on.
    pub tangent: f64,
    pub foot: Vec2,
    pub distance: f64,
}

/// An open chain of at least two distinct points, parameterized by arc length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec2>", into = "Vec<Vec2>")]
pub struct Polyline {
    points: Vec<Vec2>,
    cumulative: Vec<f64>,
}

impl TryFrom<Vec<Vec2>> for Polyline {
    type Error = Error;
    fn try_from(points: Vec<Vec2>) -> Result<Self> {
        Polyline::new(points)
    }
}

impl From<Polyline> for Vec<Vec2> {
    fn from(p: Polyline) -> Self {
        p.points
    }
}

impl Polyline {
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Geometry(format!(
                "polyline needs at least 2 points, got {}",
                points.len()
            )));
        }
        let mut cumulative = Vec::with_capacity(points.len());
        cumulative.push(0.0);
        for (i, w) in points.windows(2).enumerate() {
            let len = w[0].dist(w[1]);
            if !(len > 0.0) {
                return Err(Error::Geometry(format!(
                    "polyline points {} and {} coincide",
                    i,
                    i + 1
                )));
            }
            cumulative.push(cumulative[i] + len);
        }
        Ok(Polyline { points, cumulative })
    }

    /// Builds a polyline after dropping consecutive points closer than `eps`.
    pub fn new_dedup(points: Vec<Vec2>, eps: f64) -> Result<Self> {
        let mut out: Vec<Vec2> = Vec::with_capacity(points.len());
        for p in points {
            match out.last() {
                Some(q) if q.dist(p) <= eps => {}
                _ => out.push(p),
            }
        }
        Polyline::new(out)
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    /// Arc length at each vertex.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn start(&self) -> Vec2 {
        self.points[0]
    }

    pub fn end(&self) -> Vec2 {
        *self.points.last().unwrap()
    }

    fn segment_at(&self, s: f64) -> usize {
        let n = self.points.len() - 1;
        match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&s).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }

    /// Point at arc length `s`; values outside `[0, length]` extrapolate the end segments.
    pub fn point_at(&self, s: f64) -> Vec2 {
        let i = self.segment_at(s);
        let a = self.points[i];
        let b = self.points[i + 1];
        let seg = self.cumulative[i + 1] - self.cumulative[i];
        a.lerp(b, (s - self.cumulative[i]) / seg)
    }

    /// Heading of the segment containing arc length `s`.
    pub fn heading_at(&self, s: f64) -> f64 {
        let i = self.segment_at(s);
        (self.points[i + 1] - self.points[i]).heading()
    }

    /// World point at path coordinates `(s, d)`.
    pub fn frenet_to_world(&self, s: f64, d: f64) -> Vec2 {
        let i = self.segment_at(s);
        let dir = (self.points[i + 1] - self.points[i]) * (1.0 / (self.cumulative[i + 1] - self.cumulative[i]));
        self.point_at(s) + dir.perp() * d
    }

    fn project_impl(&self, p: Vec2, clamp_ends: bool) -> Projection {
        let n = self.points.len() - 1;
        let mut best: Option<Projection> = None;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[i + 1];
            let ab = b - a;
            let len = self.cumulative[i + 1] - self.cumulative[i];
            let mut t = (p - a).dot(ab) / (len * len);
            let lo = if !clamp_ends && i == 0 { f64::NEG_INFINITY } else { 0.0 };
            let hi = if !clamp_ends && i == n - 1 { f64::INFINITY } else { 1.0 };
            t = t.clamp(lo, hi);
            let foot = a + ab * t;
            let distance = p.dist(foot);
            if best.map_or(true, |b| distance < b.distance) {
                let dir = ab * (1.0 / len);
                best = Some(Projection {
                    s: self.cumulative[i] + t * len,
                    d: dir.cross(p - foot),
                    tangent: ab.heading(),
                    foot,
                    distance,
                });
            }
        }
        best.unwrap()
    }

    /// Closest point on the polyline; `s` is clamped to `[0, length]`.
    pub fn project(&self, p: Vec2) -> Projection {
        self.project_impl(p, true)
    }

    /// Like [`Polyline::project`], but the first and last segments extend to infinity.
    pub fn project_extended(&self, p: Vec2) -> Projection {
        self.project_impl(p, false)
    }

    pub fn project_pose(&self, pose: &Pose2) -> FrenetPose {
        let pr = self.project(pose.position);
        FrenetPose {
            s: pr.s,
            d: pr.d,
            heading_offset: wrap_angle(pose.heading - pr.tangent),
        }
    }

    /// Vertices covering arc length `[s0, s1]`, including interpolated endpoints.
    pub fn sub_points(&self, s0: f64, s1: f64) -> Vec<Vec2> {
        let mut pts = vec![self.point_at(s0)];
        for (i, &c) in self.cumulative.iter().enumerate() {
            if c > s0 + 1e-9 && c < s1 - 1e-9 {
                pts.push(self.points[i]);
            }
        }
        pts.push(self.point_at(s1));
        pts
    }

    /// The part of the polyline between arc lengths `s0 < s1`.
    pub fn slice(&self, s0: f64, s1: f64) -> Result<Polyline> {
        Polyline::new_dedup(self.sub_points(s0, s1), 1e-9)
    }

    /// Signed turning angle at each interior vertex divided by the mean length of
    /// its two adjacent segments.
    pub fn vertex_curvatures(&self) -> Vec<f64> {
        self.points
            .windows(3)
            .map(|w| {
                let a = w[1] - w[0];
                let b = w[2] - w[1];
                let turn = a.cross(b).atan2(a.dot(b));
                turn / (0.5 * (a.norm() + b.norm()))
            })
            .collect()
    }

    /// Sum of signed turning angles along the polyline.
    pub fn total_turn(&self) -> f64 {
        self.points
            .windows(3)
            .map(|w| {
                let a = w[1] - w[0];
                let b = w[2] - w[1];
                a.cross(b).atan2(a.dot(b))
            })
            .sum()
    }
}

/// Projects `p` onto `poly`, clamping to its ends.
pub fn project_to_polyline(poly: &Polyline, p: Vec2) -> Projection {
    poly.project(p)
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vec2,
    pub max: Vec2,
}

impl Aabb {
    pub fn of_points(pts: &[Vec2]) -> Aabb {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Aabb { min, max }
    }

    pub fn intersects(&self, o: &Aabb) -> bool {
        self.min.x < o.max.x && o.min.x < self.max.x && self.min.y < o.max.y && o.min.y < self.max.y
    }
}

/// A simple polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    convex: bool,
    bbox: Aabb,
}

fn signed_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    let mut a = 0.0;
    for i in 0..n {
        a += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * a
}

fn is_convex_ccw(v: &[Vec2]) -> bool {
    let n = v.len();
    (0..n).all(|i| {
        let a = v[i];
        let b = v[(i + 1) % n];
        let c = v[(i + 2) % n];
        (b - a).cross(c - b) >= -1e-12
    })
}

fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

impl Polygon {
    /// Validates simplicity and positive area; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Geometry("polygon needs at least 3 vertices".into()));
        }
        let area = signed_area(&vertices);
        if area.abs() <= 1e-12 {
            return Err(Error::Geometry("polygon has zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                    return Err(Error::Geometry(format!("polygon edges {i} and {j} intersect")));
                }
            }
        }
        Ok(Self::from_ccw_unchecked(vertices))
    }

    /// Skips validation. Callers guarantee a simple counterclockwise ring.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Vec2>) -> Self {
        let convex = is_convex_ccw(&vertices);
        let bbox = Aabb::of_points(&vertices);
        Polygon { vertices, convex, bbox }
    }

    /// Axis-aligned rectangle of the given length (x) and width (y), centered at the origin.
    pub fn rectangle(length: f64, width: f64) -> Result<Self> {
        if !(length > 0.0 && width > 0.0) {
            return Err(Error::Geometry("rectangle sides must be positive".into()));
        }
        let (hl, hw) = (0.5 * length, 0.5 * width);
        Ok(Self::from_ccw_unchecked(vec![
            Vec2::new(-hl, -hw),
            Vec2::new(hl, -hw),
            Vec2::new(hl, hw),
            Vec2::new(-hl, hw),
        ]))
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn bbox(&self) -> Aabb {
        self.bbox
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Rigid placement of a body-frame polygon at `pose`.
    pub fn placed(&self, pose: &Pose2) -> Polygon {
        let (s, c) = pose.heading.sin_cos();
        let vertices: Vec<Vec2> = self
            .vertices
            .iter()
            .map(|v| Vec2::new(pose.position.x + c * v.x - s * v.y, pose.position.y + s * v.x + c * v.y))
            .collect();
        let bbox = Aabb::of_points(&vertices);
        Polygon { vertices, convex: self.convex, bbox }
    }

    /// Even-odd point containment; boundary points may go either way.
    pub fn contains(&self, p: Vec2) -> bool {
        let v = &self.vertices;
        let n = v.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (v[i], v[j]);
            if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    /// Largest distance from the origin to a vertex.
    pub fn max_radius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Extent along the body x and y axes: (length, width).
    pub fn extent(&self) -> (f64, f64) {
        (self.bbox.max.x - self.bbox.min.x, self.bbox.max.y - self.bbox.min.y)
    }

    /// True when the interior of this polygon and the open box `b` share positive area.
    pub fn overlaps_box(&self, b: &Aabb) -> bool {
        if !self.bbox.intersects(b) {
            return false;
        }
        let scale = (b.max.x - b.min.x).max(b.max.y - b.min.y);
        if self.convex {
            sat_convex_box(&self.vertices, b, 1e-9 * scale)
        } else {
            clipped_area(&self.vertices, b) > 1e-9 * scale * scale
        }
    }

    /// Positive-area overlap between two polygons, decided by the separating-axis
    /// test when both are convex and by triangle-fan clipping otherwise.
    pub fn overlaps(&self, other: &Polygon) -> bool {
        if !self.bbox.intersects(&other.bbox) {
            return false;
        }
        if self.convex && other.convex {
            return !separated(&self.vertices, &other.vertices, 1e-9) && !separated(&other.vertices, &self.vertices, 1e-9);
        }
        let (convex, other_poly) = if other.convex { (other, self) } else if self.convex { (self, other) } else {
            return triangulate(&self.vertices)
                .into_iter()
                .any(|t| Polygon::from_ccw_unchecked(t.to_vec()).overlaps(other));
        };
        clip_convex_area(&other_poly.vertices, &convex.vertices) > 1e-9
    }
}

fn separated(a: &[Vec2], b: &[Vec2], eps: f64) -> bool {
    let n = a.len();
    for i in 0..n {
        let e = a[(i + 1) % n] - a[i];
        let axis = e.perp();
        let len = axis.norm();
        let (mut amin, mut amax) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in a {
            let v = axis.dot(*p) / len;
            amin = amin.min(v);
            amax = amax.max(v);
        }
        let (mut bmin, mut bmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in b {
            let v = axis.dot(*p) / len;
            bmin = bmin.min(v);
            bmax = bmax.max(v);
        }
        if amax <= bmin + eps || bmax <= amin + eps {
            return true;
        }
    }
    false
}

fn sat_convex_box(v: &[Vec2], b: &Aabb, eps: f64) -> bool {
    // box axes
    if v.iter().all(|p| p.x <= b.min.x + eps)
        || v.iter().all(|p| p.x >= b.max.x - eps)
        || v.iter().all(|p| p.y <= b.min.y + eps)
        || v.iter().all(|p| p.y >= b.max.y - eps)
    {
        return false;
    }
    let corners = [b.min, Vec2::new(b.max.x, b.min.y), b.max, Vec2::new(b.min.x, b.max.y)];
    let n = v.len();
    for i in 0..n {
        let a = v[i];
        let e = v[(i + 1) % n] - a;
        let len = e.norm();
        if len == 0.0 {
            continue;
        }
        // outward normal of a ccw edge is on the right
        if corners.iter().all(|c| e.cross(*c - a) / len <= eps) {
            return false;
        }
    }
    true
}

/// Area of `subject` clipped to the axis-aligned box (Sutherland-Hodgman).
fn clipped_area(subject: &[Vec2], b: &Aabb) -> f64 {
    let clip = [b.min, Vec2::new(b.max.x, b.min.y), b.max, Vec2::new(b.min.x, b.max.y)];
    clip_convex_area(subject, &clip)
}

/// Area of `subject` clipped by a convex counterclockwise polygon.
fn clip_convex_area(subject: &[Vec2], clip: &[Vec2]) -> f64 {
    let mut out: Vec<Vec2> = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        if out.is_empty() {
            return 0.0;
        }
        let a = clip[i];
        let e = clip[(i + 1) % m] - a;
        let input = std::mem::take(&mut out);
        let k = input.len();
        for j in 0..k {
            let p = input[j];
            let q = input[(j + 1) % k];
            let dp = e.cross(p - a);
            let dq = e.cross(q - a);
            if dp >= 0.0 {
                out.push(p);
            }
            if (dp >= 0.0) != (dq >= 0.0) {
                let t = dp / (dp - dq);
                out.push(p.lerp(q, t));
            }
        }
    }
    if out.len() < 3 {
        0.0
    } else {
        signed_area(&out).abs()
    }
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
fn triangulate(v: &[Vec2]) -> Vec<[Vec2; 3]> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len().saturating_sub(2));
    let mut guard = 0;
    while idx.len() > 3 && guard < 10 * v.len() {
        guard += 1;
        let n = idx.len();
        let mut clipped = false;
        for i in 0..n {
            let (a, b, c) = (v[idx[(i + n - 1) % n]], v[idx[i]], v[idx[(i + 1) % n]]);
            if (b - a).cross(c - b) <= 0.0 {
                continue;
            }
            let tri = [a, b, c];
            let blocked = idx.iter().any(|&j| {
                let p = v[j];
                p != a && p != b && p != c && point_in_triangle(p, &tri)
            });
            if !blocked {
                tris.push(tri);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            break;
        }
    }
    if idx.len() == 3 {
        tris.push([v[idx[0]], v[idx[1]], v[idx[2]]]);
    }
    tris
}

fn point_in_triangle(p: Vec2, t: &[Vec2; 3]) -> bool {
    let d1 = (t[1] - t[0]).cross(p - t[0]);
    let d2 = (t[2] - t[1]).cross(p - t[1]);
    let d3 = (t[0] - t[2]).cross(p - t[2]);
    d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0
}

/// Square grid of `cells x cells` cells centered on `center`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub center: Vec2,
    pub size_m: f64,
    pub resolution: f64,
    pub cells: usize,
}

impl GridSpec {
    pub fn new(center: Vec2, size_m: f64, resolution: f64) -> Result<Self> {
        if !(size_m > 0.0 && resolution > 0.0) {
            return Err(Error::Geometry("grid size and resolution must be positive".into()));
        }
        let cells = (size_m / resolution).round() as usize;
        if cells == 0 {
            return Err(Error::Geometry("grid has no cells".into()));
        }
        Ok(GridSpec { center, size_m, resolution, cells })
    }

    /// 150 m x 150 m at 1 m centered on `center`.
    pub fn evaluation_default(center: Vec2) -> Self {
        GridSpec::new(center, 150.0, 1.0).unwrap()
    }

    pub fn half_extent(&self) -> f64 {
        0.5 * self.cells as f64 * self.resolution
    }

    pub fn origin(&self) -> Vec2 {
        let h = self.half_extent();
        Vec2::new(self.center.x - h, self.center.y - h)
    }

    /// Bounds of the cell at (`row`, `col`); row 0 is the lowest y.
    pub fn cell_box(&self, row: usize, col: usize) -> Aabb {
        let o = self.origin();
        let r = self.resolution;
        Aabb {
            min: Vec2::new(o.x + col as f64 * r, o.y + row as f64 * r),
            max: Vec2::new(o.x + (col + 1) as f64 * r, o.y + (row + 1) as f64 * r),
        }
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Vec2 {
        let o = self.origin();
        let r = self.resolution;
        Vec2::new(o.x + (col as f64 + 0.5) * r, o.y + (row as f64 + 0.5) * r)
    }

    /// Inclusive row/column ranges whose cells may intersect `b`, or `None` if outside.
    pub fn cell_range(&self, b: &Aabb) -> Option<((usize, usize), (usize, usize))> {
        let o = self.origin();
        let r = self.resolution;
        let g = self.cells as f64;
        let c0 = ((b.min.x - o.x) / r).floor().max(0.0);
        let c1 = ((b.max.x - o.x) / r).ceil().min(g) - 1.0;
        let r0 = ((b.min.y - o.y) / r).floor().max(0.0);
        let r1 = ((b.max.y - o.y) / r).ceil().min(g) - 1.0;
        if c1 < c0 || r1 < r0 {
            return None;
        }
        Some(((r0 as usize, r1 as usize), (c0 as usize, c1 as usize)))
    }

    pub fn same_layout(&self, o: &GridSpec) -> bool {
        self.cells == o.cells
            && (self.resolution - o.resolution).abs() < 1e-12
            && self.center.dist(o.center) < 1e-9
    }
}

/// Row-major `cells x cells` array tied to a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub spec: GridSpec,
    pub data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(spec: GridSpec, value: T) -> Self {
        Grid { data: vec![value; spec.cells * spec.cells], spec }
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.data[row * self.spec.cells + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: T) {
        let g = self.spec.cells;
        self.data[row * g + col] = v;
    }
}

impl Grid<bool> {
    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Marks every cell whose square overlaps `poly` with positive area.
    pub fn mark_polygon(&mut self, poly: &Polygon) {
        let spec = self.spec;
        let data = &mut self.data;
        for_each_candidate_cell(&spec, poly, |idx, overlaps| {
            if !data[idx] && overlaps() {
                data[idx] = true;
            }
        });
    }
}

/// Visits every cell of `spec` inside the bounding box of `poly` with its flat index
/// and a lazy positive-area overlap test, so callers can skip the test when possible.
pub fn for_each_candidate_cell(spec: &GridSpec, poly: &Polygon, mut visit: impl FnMut(usize, &dyn Fn() -> bool)) {
    let Some(((r0, r1), (c0, c1))) = spec.cell_range(&poly.bbox()) else {
        return;
    };
    for row in r0..=r1 {
        for col in c0..=c1 {
            let cell = spec.cell_box(row, col);
            visit(row * spec.cells + col, &|| poly.overlaps_box(&cell));
        }
    }
}

/// Footprint placements covering the motion through `poses`.
///
/// Consecutive poses are interpolated so that no footprint vertex moves more than
/// `max_step` between placements. Every input pose is placed exactly.
pub fn swept_volume(footprint: &Polygon, poses: &[Pose2], max_step: f64) -> Result<Vec<Polygon>> {
    if poses.is_empty() {
        return Err(Error::Geometry("swept volume needs at least one pose".into()));
    }
    if !(max_step > 0.0) {
        return Err(Error::Geometry("sweep step must be positive".into()));
    }
    let radius = footprint.max_radius();
    let mut out = Vec::with_capacity(poses.len());
    out.push(footprint.placed(&poses[0]));
    for w in poses.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dtheta = wrap_angle(b.heading - a.heading);
        let travel = a.position.dist(b.position) + radius * dtheta.abs();
        let n = ((travel / max_step).ceil() as usize).max(1);
        for i in 1..=n {
            let t = i as f64 / n as f64;
            let pose = Pose2::new(a.position.lerp(b.position, t), a.heading + dtheta * t);
            out.push(footprint.placed(&pose));
        }
    }
    Ok(out)
}

/// Binary grid of the cells overlapped by any member of `region`.
pub fn rasterize_region(region: &[Polygon], spec: &GridSpec) -> Grid<bool> {
    let mut grid = Grid::filled(*spec, false);
    for poly in region {
        grid.mark_polygon(poly);
    }
    grid
}
