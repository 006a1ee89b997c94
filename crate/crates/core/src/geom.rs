//! Planar convex geometry and n-dimensional axis-aligned boxes.
//!
//! Every polygon produced here is strictly convex and counterclockwise.
//! Operations that can legitimately produce nothing (clipping, erosion)
//! return `Option<ConvexPolygon>`; `None` is the empty set.
//!
//! Coincidence and collinearity tests use an absolute tolerance of
//! `1e-12` times the bounding-box diagonal of the polygon involved.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Relative geometric tolerance, scaled by the bounding-box diagonal.
pub const REL_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid exponent p = {0}; expected 1 <= p <= 2")]
    InvalidExponent(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(p: [f64; 2]) -> Self {
        Point { x: p[0], y: p[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Rotate by +90 degrees.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Closed half-plane `{x : normal·x <= offset}` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    normal: Point,
    offset: f64,
}

impl HalfPlane {
    /// Normalizes `normal` to unit length, rescaling `offset` accordingly.
    pub fn new(normal: Point, offset: f64) -> Result<Self, GeomError> {
        let len = normal.norm();
        if !(len > 0.0) || !len.is_finite() || !offset.is_finite() {
            return Err(GeomError::InvalidArgument(format!(
                "half-plane normal must be finite and nonzero, got {normal:?}"
            )));
        }
        Ok(HalfPlane {
            normal: normal * (1.0 / len),
            offset: offset / len,
        })
    }

    /// Points at least as close to `a` as to `b`.
    pub fn bisector(a: Point, b: Point) -> Result<Self, GeomError> {
        HalfPlane::new(b - a, 0.5 * (b.dot(b) - a.dot(a)))
    }

    pub fn normal(&self) -> Point {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance, positive outside.
    #[inline]
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// The same half-plane with its boundary moved inward by `r`.
    pub fn shifted_inward(&self, r: f64) -> HalfPlane {
        HalfPlane {
            normal: self.normal,
            offset: self.offset - r,
        }
    }
}

/// Strictly convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonFile", into = "PolygonFile")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

/// On-disk form `{"vertices": [[x, y], ...]}`.
#[derive(Serialize, Deserialize)]
struct PolygonFile {
    vertices: Vec<[f64; 2]>,
}

impl TryFrom<PolygonFile> for ConvexPolygon {
    type Error = GeomError;
    fn try_from(f: PolygonFile) -> Result<Self, GeomError> {
        let pts: Vec<Point> = f.vertices.into_iter().map(Point::from).collect();
        ConvexPolygon::new(&pts)
    }
}

impl From<ConvexPolygon> for PolygonFile {
    fn from(p: ConvexPolygon) -> Self {
        PolygonFile {
            vertices: p.vertices.into_iter().map(Into::into).collect(),
        }
    }
}

fn bbox_diagonal(points: &[Point]) -> f64 {
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (hi - lo).norm()
}

impl ConvexPolygon {
    /// Convex hull of `points`, counterclockwise, starting at the
    /// lexicographically smallest vertex, collinear points removed.
    pub fn new(points: &[Point]) -> Result<Self, GeomError> {
        if points.len() < 3 {
            return Err(GeomError::DegenerateInput(format!(
                "need at least 3 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(GeomError::DegenerateInput("non-finite coordinate".into()));
        }
        let diag = bbox_diagonal(points);
        if !(diag > 0.0) {
            return Err(GeomError::DegenerateInput("all points coincide".into()));
        }
        let eps = REL_EPS * diag;

        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| a.dist(*b) <= eps);

        // Left turn by more than eps (distance of the middle point from the chord).
        let left_turn = |o: Point, a: Point, b: Point| {
            let chord = b - o;
            let len = chord.norm();
            len > eps && chord.cross(a - o) < -eps * len
        };
        let mut hull: Vec<Point> = Vec::with_capacity(pts.len() + 1);
        for &p in &pts {
            while hull.len() >= 2 && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
                hull.pop();
            }
            hull.push(p);
        }
        let lower_len = hull.len() + 1;
        for &p in pts.iter().rev().skip(1) {
            while hull.len() >= lower_len
                && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p)
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();

        if hull.len() < 3 {
            return Err(GeomError::DegenerateInput("hull has zero area".into()));
        }
        let poly = ConvexPolygon { vertices: hull };
        if !(poly.area() > eps * diag) {
            return Err(GeomError::DegenerateInput("hull has zero area".into()));
        }
        Ok(poly)
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeomError> {
        ConvexPolygon::new(&[
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    pub fn unit_square() -> Self {
        Self::rectangle(0.0, 0.0, 1.0, 1.0).expect("unit square")
    }

    /// Regular `m`-gon inscribed in the circle of radius `radius` about `center`.
    pub fn regular(m: usize, radius: f64, center: Point) -> Result<Self, GeomError> {
        if m < 3 || !(radius > 0.0) {
            return Err(GeomError::InvalidArgument(format!(
                "regular polygon needs m >= 3 and radius > 0 (m = {m}, radius = {radius})"
            )));
        }
        let pts: Vec<Point> = (0..m)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / m as f64;
                center + Point::new(a.cos(), a.sin()) * radius
            })
            .collect();
        ConvexPolygon::new(&pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(v_i, v_{i+1})`, counterclockwise.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Outward half-planes, one per edge.
    pub fn halfplanes(&self) -> Vec<HalfPlane> {
        self.edges()
            .map(|(a, b)| {
                let n = (b - a).perp() * -1.0;
                HalfPlane::new(n, n.dot(a)).expect("polygon edges have positive length")
            })
            .collect()
    }

    /// Absolute tolerance for this polygon's coincidence tests.
    pub fn eps(&self) -> f64 {
        REL_EPS * self.bbox_diagonal()
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let o = self.vertices[0];
        0.5 * self
            .edges()
            .map(|(a, b)| (a - o).cross(b - o))
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let o = self.vertices[0];
        let mut acc = Point::default();
        let mut area2 = 0.0;
        for (a, b) in self.edges() {
            let (a, b) = (a - o, b - o);
            let w = a.cross(b);
            acc = acc + (a + b) * w;
            area2 += w;
        }
        o + acc * (1.0 / (3.0 * area2))
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].dist(v[j]));
            }
        }
        best
    }

    /// Point-in-polygon test; `tol > 0` admits points up to `tol` outside,
    /// `tol < 0` requires points to be at least `|tol|` inside.
    pub fn contains(&self, q: Point, tol: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(q - a) / e.norm() >= -tol
        })
    }

    /// Whether every vertex of `other` lies in `self` (up to `self.eps()`).
    pub fn contains_polygon(&self, other: &ConvexPolygon) -> bool {
        let tol = self.eps().max(other.eps());
        other.vertices.iter().all(|&q| self.contains(q, tol))
    }

    /// Distance from `q` to the boundary, positive inside.
    pub fn boundary_distance(&self, q: Point) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                e.cross(q - a) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Intersection with a half-plane.
    pub fn clip(&self, h: &HalfPlane) -> Option<ConvexPolygon> {
        let eps = self.eps();
        let s: Vec<f64> = self.vertices.iter().map(|&p| h.signed_distance(p)).collect();
        if s.iter().all(|&d| d <= eps) {
            return Some(self.clone());
        }
        if s.iter().all(|&d| d >= -eps) {
            return None;
        }
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (a, b) = (self.vertices[i], self.vertices[j]);
            let (sa, sb) = (s[i], s[j]);
            if sa <= eps {
                out.push(a);
            }
            if (sa < -eps && sb > eps) || (sa > eps && sb < -eps) {
                let t = sa / (sa - sb);
                out.push(a + (b - a) * t);
            }
        }
        ConvexPolygon::new(&out).ok()
    }

    /// Inner parallel body `{x ∈ P : dist(x, ∂P) >= r}`.
    pub fn erode(&self, r: f64) -> Option<ConvexPolygon> {
        if r <= 0.0 {
            return Some(self.clone());
        }
        let mut current = self.clone();
        for h in self.halfplanes() {
            current = current.clip(&h.shifted_inward(r))?;
        }
        Some(current)
    }

    /// Radius of the largest inscribed disk, by bisection on erosion.
    pub fn inradius(&self) -> f64 {
        let (mut lo, mut hi) = (0.0, 0.5 * self.diameter());
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.erode(mid).is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Exact area of `P ∩ B(center, radius)`.
    pub fn disk_intersection_area(&self, center: Point, radius: f64) -> f64 {
        if radius <= 0.0 {
            return 0.0;
        }
        let total: f64 = self
            .edges()
            .map(|(a, b)| signed_triangle_disk_area(a - center, b - center, radius))
            .sum();
        total.max(0.0)
    }

    /// `(1 − t)·A + t·B` by merging the edge sequences of the scaled polygons.
    pub fn minkowski_combination(
        a: &ConvexPolygon,
        b: &ConvexPolygon,
        t: f64,
    ) -> Result<ConvexPolygon, GeomError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(GeomError::InvalidArgument(format!("t = {t} not in [0, 1]")));
        }
        if t == 0.0 {
            return Ok(a.clone());
        }
        if t == 1.0 {
            return Ok(b.clone());
        }
        let p = bottom_first(a.vertices.iter().map(|&v| v * (1.0 - t)).collect());
        let q = bottom_first(b.vertices.iter().map(|&v| v * t).collect());
        let (n, m) = (p.len(), q.len());
        let mut out = Vec::with_capacity(n + m);
        let (mut i, mut j) = (0usize, 0usize);
        while i < n || j < m {
            out.push(p[i % n] + q[j % m]);
            if i == n {
                j += 1;
                continue;
            }
            if j == m {
                i += 1;
                continue;
            }
            let ep = p[(i + 1) % n] - p[i];
            let eq = q[(j + 1) % m] - q[j];
            let c = ep.cross(eq);
            if c >= 0.0 {
                i += 1;
            }
            if c <= 0.0 {
                j += 1;
            }
        }
        ConvexPolygon::new(&out)
    }

    /// Uniform scaling about the origin.
    pub fn scaled(&self, s: f64) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn translated(&self, d: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v + d).collect(),
        }
    }
}

fn bottom_first(mut v: Vec<Point>) -> Vec<Point> {
    let start = (0..v.len())
        .min_by(|&i, &j| {
            v[i].y
                .total_cmp(&v[j].y)
                .then(v[i].x.total_cmp(&v[j].x))
        })
        .unwrap_or(0);
    v.rotate_left(start);
    v
}

/// Signed area of `triangle(0, a, b) ∩ B(0, r)`.
fn signed_triangle_disk_area(a: Point, b: Point, r: f64) -> f64 {
    let d = b - a;
    let qa = d.dot(d);
    if qa == 0.0 {
        return 0.0;
    }
    let qb = a.dot(d);
    let qc = a.dot(a) - r * r;
    let mut ts = [0.0, 0.0, 0.0, 0.0];
    let mut nt = 1;
    let disc = qb * qb - qa * qc;
    if disc > 0.0 {
        let sq = disc.sqrt();
        for t in [(-qb - sq) / qa, (-qb + sq) / qa] {
            if t > 0.0 && t < 1.0 {
                ts[nt] = t;
                nt += 1;
            }
        }
    }
    ts[nt] = 1.0;
    nt += 1;
    let mut area = 0.0;
    for w in ts[..nt].windows(2) {
        let (p0, p1) = (a + d * w[0], a + d * w[1]);
        let mid = a + d * (0.5 * (w[0] + w[1]));
        if mid.dot(mid) <= r * r {
            area += 0.5 * p0.cross(p1);
        } else {
            area += 0.5 * r * r * p0.cross(p1).atan2(p0.dot(p1));
        }
    }
    area
}

/// Inscribed polygon of the planar ℓ_p ball of radius `r`, with `m`
/// vertices at equiangular superellipse parameters.
pub fn lp_ball_polygon(p: f64, r: f64, m: usize) -> Result<ConvexPolygon, GeomError> {
    if !(1.0..=2.0).contains(&p) {
        return Err(GeomError::InvalidExponent(p));
    }
    if m < 4 || !m.is_multiple_of(2) || !(r > 0.0) {
        return Err(GeomError::InvalidArgument(format!(
            "lp ball polygon needs even m >= 4 and r > 0 (m = {m}, r = {r})"
        )));
    }
    let e = 2.0 / p;
    let pts: Vec<Point> = (0..m)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / m as f64;
            let (s, c) = th.sin_cos();
            // Snap the axis points exactly.
            let c = if c.abs() < 1e-15 { 0.0 } else { c };
            let s = if s.abs() < 1e-15 { 0.0 } else { s };
            Point::new(r * c.signum() * c.abs().powf(e), r * s.signum() * s.abs().powf(e))
        })
        .collect();
    ConvexPolygon::new(&pts)
}

/// Axis-aligned box `[0, L_1] × ... × [0, L_n]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BoxDomain {
    lengths: Vec<f64>,
}

impl TryFrom<Vec<f64>> for BoxDomain {
    type Error = GeomError;
    fn try_from(v: Vec<f64>) -> Result<Self, GeomError> {
        BoxDomain::new(v)
    }
}

impl From<BoxDomain> for Vec<f64> {
    fn from(b: BoxDomain) -> Self {
        b.lengths
    }
}

impl BoxDomain {
    pub fn new(lengths: Vec<f64>) -> Result<Self, GeomError> {
        if lengths.is_empty() {
            return Err(GeomError::InvalidArgument("box dimension must be >= 1".into()));
        }
        if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(GeomError::InvalidArgument(format!(
                "box side lengths must be positive, got {lengths:?}"
            )));
        }
        Ok(BoxDomain { lengths })
    }

    pub fn cube(n: usize, side: f64) -> Result<Self, GeomError> {
        BoxDomain::new(vec![side; n])
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    pub fn diameter(&self) -> f64 {
        self.lengths.iter().map(|l| l * l).sum::<f64>().sqrt()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(&self.lengths)
                .all(|(&xi, &l)| xi >= -tol && xi <= l + tol)
    }

    pub fn scaled(&self, s: f64) -> BoxDomain {
        BoxDomain {
            lengths: self.lengths.iter().map(|l| l * s).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn hexagon() -> ConvexPolygon {
        ConvexPolygon::regular(6, 1.0, Point::default()).unwrap()
    }

    fn equilateral() -> ConvexPolygon {
        ConvexPolygon::new(&[p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)]).unwrap()
    }

    #[test]
    fn polygon_new_normalizes() {
        let sq = ConvexPolygon::new(&[p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap();
        assert_eq!(sq.vertices(), &[p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]);
        let cw = ConvexPolygon::new(&[p(0., 1.), p(1., 1.), p(1., 0.), p(0., 0.)]).unwrap();
        assert_eq!(cw, sq);
        // interior, duplicate and collinear points vanish
        let messy = ConvexPolygon::new(&[
            p(0., 0.),
            p(0.5, 0.),
            p(1., 0.),
            p(1., 1.),
            p(0.3, 0.4),
            p(0., 1.),
            p(1., 1.),
        ])
        .unwrap();
        assert_eq!(messy, sq);
    }

    #[test]
    fn polygon_new_rejects_degenerate() {
        assert!(matches!(
            ConvexPolygon::new(&[p(0., 0.), p(1., 0.), p(2., 0.)]),
            Err(GeomError::DegenerateInput(_))
        ));
        assert!(ConvexPolygon::new(&[p(0., 0.), p(1., 0.)]).is_err());
        assert!(ConvexPolygon::new(&[p(1., 1.); 4]).is_err());
    }

    #[test]
    fn areas() {
        assert_eq!(ConvexPolygon::unit_square().area(), 1.0);
        let tri = ConvexPolygon::new(&[p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap();
        assert_eq!(tri.area(), 0.5);
        assert!((hexagon().area() - 2.598_076_211_353_316).abs() < 1e-12);
    }

    #[test]
    fn diameters() {
        assert!((ConvexPolygon::unit_square().diameter() - 2f64.sqrt()).abs() < 1e-15);
        let r = ConvexPolygon::rectangle(0., 0., 3., 1.).unwrap();
        assert!((r.diameter() - 10f64.sqrt()).abs() < 1e-15);
        assert!((hexagon().diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn clipping() {
        let sq = ConvexPolygon::unit_square();
        let left = sq.clip(&HalfPlane::new(p(1., 0.), 0.5).unwrap()).unwrap();
        assert!((left.area() - 0.5).abs() < 1e-15);
        assert_eq!(left.vertices().len(), 4);
        assert_eq!(sq.clip(&HalfPlane::new(p(1., 0.), 2.0).unwrap()).unwrap(), sq);
        assert!(sq.clip(&HalfPlane::new(p(1., 0.), -1.0).unwrap()).is_none());
        // touching along an edge only is empty
        assert!(sq.clip(&HalfPlane::new(p(1., 0.), 0.0).unwrap()).is_none());
    }

    #[test]
    fn erosion() {
        let sq = ConvexPolygon::unit_square();
        let e = sq.erode(0.25).unwrap();
        assert!((e.area() - 0.25).abs() < 1e-14);
        assert!(sq.erode(0.5).is_none());
        let t = equilateral().erode(0.1).unwrap();
        let side = 1.0 - 2.0 * 3f64.sqrt() * 0.1;
        assert!((t.diameter() - side).abs() < 1e-12, "{}", t.diameter());
        assert!((side - 0.6536).abs() < 1e-4);
    }

    #[test]
    fn inradius_of_square_and_triangle() {
        assert!((ConvexPolygon::unit_square().inradius() - 0.5).abs() < 1e-12);
        assert!((equilateral().inradius() - 3f64.sqrt() / 6.0).abs() < 1e-12);
    }

    #[test]
    fn disk_areas() {
        let sq = ConvexPolygon::unit_square();
        let full = sq.disk_intersection_area(p(0.5, 0.5), 0.2);
        assert!((full - PI * 0.04).abs() < 1e-15);
        let quarter = sq.disk_intersection_area(p(0., 0.), 0.5);
        assert!((quarter - PI / 16.0).abs() < 1e-15);
        assert!((quarter - 0.19635).abs() < 1e-5);
        let half = sq.disk_intersection_area(p(0.5, 0.), 0.25);
        assert!((half - PI * 0.0625 / 2.0).abs() < 1e-15);
        // disk containing the polygon
        assert!((sq.disk_intersection_area(p(0.5, 0.5), 5.0) - 1.0).abs() < 1e-14);
        // disk far away
        assert_eq!(sq.disk_intersection_area(p(5., 5.), 1.0), 0.0);
    }

    #[test]
    fn minkowski() {
        let sq = ConvexPolygon::unit_square();
        let c = ConvexPolygon::minkowski_combination(&sq, &sq, 0.5).unwrap();
        for (u, v) in c.vertices().iter().zip(sq.vertices()) {
            assert!(u.dist(*v) < 1e-12);
        }
        let big = ConvexPolygon::rectangle(0., 0., 3., 3.).unwrap();
        let m = ConvexPolygon::minkowski_combination(&sq, &big, 0.5).unwrap();
        assert!((m.area() - 4.0).abs() < 1e-12);
        let a = ConvexPolygon::rectangle(0., 0., 1., 0.01).unwrap();
        let b = ConvexPolygon::rectangle(0., 0., 0.01, 1.).unwrap();
        let m = ConvexPolygon::minkowski_combination(&a, &b, 0.5).unwrap();
        assert!((m.area() - 0.505f64.powi(2)).abs() < 1e-12);
        assert!((m.area() - 0.2550).abs() < 1e-4);
    }

    #[test]
    fn minkowski_triangle_and_square() {
        let tri = ConvexPolygon::new(&[p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap();
        let sq = ConvexPolygon::unit_square();
        let m = ConvexPolygon::minkowski_combination(&tri, &sq, 0.5).unwrap();
        // 0.5T + 0.5S: area = 0.25·0.5 + 0.25·1 + mixed 2·0.25·V(T,S); V(T,S) = 1
        assert!((m.area() - (0.125 + 0.25 + 0.5)).abs() < 1e-12, "{}", m.area());
    }

    #[test]
    fn lp_balls() {
        let d = lp_ball_polygon(1.0, 1.0, 4).unwrap();
        assert_eq!(d.vertices().len(), 4);
        assert!((d.area() - 2.0).abs() < 1e-15);
        // intermediate vertices of the ℓ1 ball are collinear and get merged
        assert_eq!(lp_ball_polygon(1.0, 1.0, 64).unwrap().vertices().len(), 4);
        let disk = lp_ball_polygon(2.0, 1.0, 256).unwrap();
        assert!((disk.area() - PI).abs() / PI < 1e-3);
        assert!(disk.area() < PI);
        let unit = lp_ball_polygon(1.0, 0.5f64.sqrt(), 8).unwrap();
        assert!((unit.area() - 1.0).abs() < 1e-14);
        assert!(matches!(
            lp_ball_polygon(2.5, 1.0, 16),
            Err(GeomError::InvalidExponent(_))
        ));
        assert!(lp_ball_polygon(0.5, 1.0, 16).is_err());
    }

    #[test]
    fn containment() {
        let sq = ConvexPolygon::unit_square();
        assert!(sq.contains(p(0.5, 0.5), 0.0));
        assert!(!sq.contains(p(1.0 + 1e-6, 0.5), 1e-9));
        assert!(sq.contains(p(1.0, 0.5), 1e-9));
        assert!(!sq.contains(p(1.0, 0.5), -1e-9));
        let inner = ConvexPolygon::rectangle(0.2, 0.2, 0.8, 0.8).unwrap();
        assert!(sq.contains_polygon(&inner));
        assert!(!inner.contains_polygon(&sq));
    }

    #[test]
    fn polygon_json_roundtrip_normalizes() {
        let json = r#"{"vertices": [[0,1],[1,1],[1,0],[0,0],[0.5,0]]}"#;
        let poly: ConvexPolygon = serde_json::from_str(json).unwrap();
        assert_eq!(poly, ConvexPolygon::unit_square());
        let back = serde_json::to_string(&poly).unwrap();
        assert_eq!(back, r#"{"vertices":[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]}"#);
        assert!(serde_json::from_str::<ConvexPolygon>(r#"{"vertices":[[0,0],[1,0],[2,0]]}"#).is_err());
    }

    #[test]
    fn boxes() {
        let b = BoxDomain::new(vec![2.0, 1.0, 0.5]).unwrap();
        assert_eq!(b.volume(), 1.0);
        assert!(b.contains(&[1.0, 0.5, 0.5], 0.0));
        assert!(!b.contains(&[1.0, 0.5, 0.6], 1e-9));
        assert!(BoxDomain::new(vec![]).is_err());
        assert!(BoxDomain::new(vec![1.0, 0.0]).is_err());
    }
}
