//! Triangle meshes of convex polygons.
//!
//! Boundary samples and an equilateral interior lattice share a spacing a
//! little below `h`, and the
//! triangulation is made Delaunay by incremental insertion with Lawson
//! flips, followed by Laplacian smoothing of interior vertices.
//! [`Mesh::refine`] splits every triangle in four, producing nested meshes.

use super::boundary::{BoundarySpec, BoundaryTag};
use super::DiscretizeError;
use crate::geom::{ConvexPolygon, Point};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Default cap on the number of mesh vertices.
pub const DEFAULT_MAX_VERTICES: usize = 2_000_000;

/// Interior lattice points closer than this fraction of the lattice
/// spacing to the boundary are dropped.
const BOUNDARY_GAP: f64 = 0.5;

/// Lattice spacing relative to the requested edge length; an equilateral
/// lattice at this spacing has about 2/h² vertices per unit area.
const LATTICE_FRACTION: f64 = 0.7598;

const SMOOTHING_ROUNDS: usize = 3;
const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub edge: [usize; 2],
    pub tag: BoundaryTag,
    /// Arc-length parameters of the endpoints, measured counterclockwise
    /// from polygon vertex 0; the end may equal the perimeter.
    pub arc: [f64; 2],
}

impl BoundaryEdge {
    pub fn arc_midpoint(&self, perimeter: f64) -> f64 {
        let m = 0.5 * (self.arc[0] + self.arc[1]);
        if m >= perimeter {
            m - perimeter
        } else {
            m
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<BoundaryEdge>,
    pub perimeter: f64,
}

/// Options for [`triangulate_with`].
#[derive(Clone, Copy, Debug)]
pub struct MeshOptions {
    pub max_vertices: usize,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

pub fn triangulate(poly: &ConvexPolygon, h: f64) -> Result<Mesh, DiscretizeError> {
    triangulate_with(poly, h, MeshOptions::default())
}

pub fn triangulate_with(
    poly: &ConvexPolygon,
    h: f64,
    opts: MeshOptions,
) -> Result<Mesh, DiscretizeError> {
    let diam = poly.diameter();
    if !(h > 0.0) || h > diam {
        return Err(DiscretizeError::InvalidArgument(format!(
            "mesh size h = {h} must satisfy 0 < h <= diameter = {diam}"
        )));
    }
    // Lattice spacing chosen so the longest edges stay at or below h.
    let s = h * LATTICE_FRACTION;
    let estimate = poly.area() / (0.75f64.sqrt() * s * s) + poly.perimeter() / s;
    if estimate > opts.max_vertices as f64 {
        return Err(DiscretizeError::MeshTooLarge {
            estimated: estimate as usize,
            cap: opts.max_vertices,
        });
    }

    // Boundary samples, counterclockwise from vertex 0.
    let mut points: Vec<Point> = Vec::new();
    let mut arcs: Vec<f64> = Vec::new();
    let mut s0 = 0.0;
    for (a, b) in poly.edges() {
        let len = a.dist(b);
        let pieces = (len / s).ceil().max(1.0) as usize;
        for k in 0..pieces {
            let t = k as f64 / pieces as f64;
            points.push(a + (b - a) * t);
            arcs.push(s0 + len * t);
        }
        s0 += len;
    }
    let perimeter = s0;
    let nb = points.len();

    let center = poly.centroid();
    let mut tri = Triangulation::fan(&points, center);

    // Equilateral lattice through the centroid, nudged off the fan edges.
    let origin = center + Point::new(0.1618 * s, 0.0718 * s);
    let h = s;
    let (lo, hi) = poly.bbox();
    let dy = 0.75f64.sqrt() * h;
    let j0 = ((lo.y - origin.y) / dy).floor() as i64 - 1;
    let j1 = ((hi.y - origin.y) / dy).ceil() as i64 + 1;
    let i0 = ((lo.x - origin.x) / h).floor() as i64 - 2;
    let i1 = ((hi.x - origin.x) / h).ceil() as i64 + 2;
    let gap = BOUNDARY_GAP * h;
    for j in j0..=j1 {
        let shift = if j.rem_euclid(2) == 1 { 0.5 * h } else { 0.0 };
        for i in i0..=i1 {
            let q = Point::new(origin.x + i as f64 * h + shift, origin.y + j as f64 * dy);
            if poly.boundary_distance(q) >= gap && q.dist(center) >= gap {
                tri.insert(q)?;
            }
        }
    }

    let fixed: Vec<bool> = (0..tri.points.len()).map(|v| v < nb).collect();
    for _ in 0..SMOOTHING_ROUNDS {
        tri.smooth(&fixed);
        tri.make_delaunay();
    }

    let boundary = (0..nb)
        .map(|k| {
            let next = (k + 1) % nb;
            let end = if next == 0 { perimeter } else { arcs[next] };
            BoundaryEdge {
                edge: [k, next],
                tag: BoundaryTag::Neumann,
                arc: [arcs[k], end],
            }
        })
        .collect();
    let mesh = Mesh {
        vertices: tri.points,
        triangles: tri.tris,
        boundary,
        perimeter,
    };
    mesh.validate(poly.area())?;
    Ok(mesh)
}

impl Mesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| self.triangle_area(t)).sum()
    }

    pub fn triangle_area(&self, t: &[usize; 3]) -> f64 {
        let [a, b, c] = t.map(|i| self.vertices[i]);
        0.5 * (b - a).cross(c - a)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let p = t.map(|i| self.vertices[i]);
                (0..3)
                    .map(|k| {
                        let u = p[(k + 1) % 3] - p[k];
                        let v = p[(k + 2) % 3] - p[k];
                        u.cross(v).atan2(u.dot(v)).abs()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
            .to_degrees()
    }

    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| self.vertices[a].dist(self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Checks orientation, boundary-edge incidence and total area.
    pub fn validate(&self, expected_area: f64) -> Result<(), DiscretizeError> {
        for (i, t) in self.triangles.iter().enumerate() {
            if !(self.triangle_area(t) > 0.0) {
                return Err(DiscretizeError::InvalidMesh(format!("triangle {i} is not positively oriented")));
            }
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *directed.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        if directed.values().any(|&c| c > 1) {
            return Err(DiscretizeError::InvalidMesh("non-manifold edge".into()));
        }
        let open = directed
            .keys()
            .filter(|&&(a, b)| !directed.contains_key(&(b, a)))
            .count();
        if open != self.boundary.len() {
            return Err(DiscretizeError::InvalidMesh(format!(
                "{open} open edges but {} boundary edges",
                self.boundary.len()
            )));
        }
        for e in &self.boundary {
            if directed.get(&(e.edge[0], e.edge[1])) != Some(&1) {
                return Err(DiscretizeError::InvalidMesh(format!(
                    "boundary edge {:?} not in exactly one triangle",
                    e.edge
                )));
            }
        }
        let area = self.area();
        if (area - expected_area).abs() > 1e-9 * expected_area {
            return Err(DiscretizeError::InvalidMesh(format!(
                "mesh area {area} differs from domain area {expected_area}"
            )));
        }
        Ok(())
    }

    /// Split every triangle into four through its edge midpoints.
    pub fn refine(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                vertices.push((vertices[a] + vertices[b]) * 0.5);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        let mut boundary = Vec::with_capacity(2 * self.boundary.len());
        for e in &self.boundary {
            let m = midpoint(e.edge[0], e.edge[1], &mut vertices);
            let sm = 0.5 * (e.arc[0] + e.arc[1]);
            boundary.push(BoundaryEdge {
                edge: [e.edge[0], m],
                tag: e.tag,
                arc: [e.arc[0], sm],
            });
            boundary.push(BoundaryEdge {
                edge: [m, e.edge[1]],
                tag: e.tag,
                arc: [sm, e.arc[1]],
            });
        }
        Mesh {
            vertices,
            triangles,
            boundary,
            perimeter: self.perimeter,
        }
    }

    /// Tag every boundary edge by the interval containing its midpoint.
    pub fn tag_boundary(&self, spec: &BoundarySpec) -> Mesh {
        let mut out = self.clone();
        for e in &mut out.boundary {
            e.tag = spec.tag_at(e.arc_midpoint(self.perimeter));
        }
        out
    }

    /// Vertices lying on at least one Dirichlet edge.
    pub fn dirichlet_vertices(&self) -> Vec<bool> {
        let mut fixed = vec![false; self.vertices.len()];
        for e in &self.boundary {
            if e.tag == BoundaryTag::Dirichlet {
                fixed[e.edge[0]] = true;
                fixed[e.edge[1]] = true;
            }
        }
        fixed
    }

    /// Scaled copy about the origin.
    pub fn scaled(&self, s: f64) -> Mesh {
        Mesh {
            vertices: self.vertices.iter().map(|&v| v * s).collect(),
            triangles: self.triangles.clone(),
            boundary: self
                .boundary
                .iter()
                .map(|e| BoundaryEdge {
                    edge: e.edge,
                    tag: e.tag,
                    arc: [e.arc[0] * s, e.arc[1] * s],
                })
                .collect(),
            perimeter: self.perimeter * s,
        }
    }
}

#[inline]
fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Positive when `d` lies inside the circumcircle of counterclockwise `a, b, c`.
#[inline]
fn incircle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let (a2, b2, c2) = (ad.dot(ad), bd.dot(bd), cd.dot(cd));
    ad.x * (bd.y * c2 - b2 * cd.y) - ad.y * (bd.x * c2 - b2 * cd.x) + a2 * (bd.x * cd.y - bd.y * cd.x)
}

/// Working triangulation with neighbor links; `nbr[t][k]` is the triangle
/// across the edge opposite vertex `k` of `t`.
struct Triangulation {
    points: Vec<Point>,
    tris: Vec<[usize; 3]>,
    nbr: Vec<[usize; 3]>,
    last: usize,
    scale: f64,
}

impl Triangulation {
    /// Fan from `center` over the closed boundary polyline `boundary`.
    fn fan(boundary: &[Point], center: Point) -> Self {
        let nb = boundary.len();
        let mut points = boundary.to_vec();
        points.push(center);
        let c = nb;
        let mut tris = Vec::with_capacity(nb);
        let mut nbr = Vec::with_capacity(nb);
        for k in 0..nb {
            let next = (k + 1) % nb;
            // (c, b_k, b_{k+1}): opposite c is the boundary segment.
            tris.push([c, k, next]);
            nbr.push([NONE, (k + 1) % nb, (k + nb - 1) % nb]);
        }
        let scale = boundary
            .iter()
            .map(|p| p.dist(center))
            .fold(0.0, f64::max);
        Triangulation {
            points,
            tris,
            nbr,
            last: 0,
            scale,
        }
    }

    fn p(&self, t: usize, k: usize) -> Point {
        self.points[self.tris[t][k % 3]]
    }

    fn locate(&self, q: Point) -> Option<usize> {
        let tol = 1e-13 * self.scale * self.scale;
        let mut t = self.last;
        let mut steps = 0usize;
        'walk: while steps <= 4 * self.tris.len() {
            steps += 1;
            for k in 0..3 {
                if orient(self.p(t, k + 1), self.p(t, k + 2), q) < -tol {
                    let u = self.nbr[t][k];
                    if u == NONE {
                        return None;
                    }
                    t = u;
                    continue 'walk;
                }
            }
            return Some(t);
        }
        // Walks can cycle on non-Delaunay input; fall back to a scan.
        (0..self.tris.len()).find(|&t| (0..3).all(|k| orient(self.p(t, k + 1), self.p(t, k + 2), q) >= -tol))
    }

    fn replace_nbr(&mut self, t: usize, old: usize, new: usize) {
        if t == NONE {
            return;
        }
        for k in 0..3 {
            if self.nbr[t][k] == old {
                self.nbr[t][k] = new;
                return;
            }
        }
    }

    fn insert(&mut self, q: Point) -> Result<(), DiscretizeError> {
        let t = self
            .locate(q)
            .ok_or_else(|| DiscretizeError::InvalidMesh(format!("point {q:?} outside triangulation")))?;
        let rel = 1e-10 * self.scale * self.scale;
        let on_edge = (0..3).find(|&k| orient(self.p(t, k + 1), self.p(t, k + 2), q).abs() <= rel);
        let p = self.points.len();
        self.points.push(q);
        let mut stack = Vec::new();
        match on_edge {
            None => {
                let [a, b, c] = self.tris[t];
                let [n0, n1, n2] = self.nbr[t];
                let t1 = self.tris.len();
                let t2 = t1 + 1;
                self.tris[t] = [p, b, c];
                self.nbr[t] = [n0, t1, t2];
                self.tris.push([p, c, a]);
                self.nbr.push([n1, t2, t]);
                self.tris.push([p, a, b]);
                self.nbr.push([n2, t, t1]);
                self.replace_nbr(n1, t, t1);
                self.replace_nbr(n2, t, t2);
                stack.extend([t, t1, t2]);
            }
            Some(k) => {
                // Split the edge opposite vertex k shared with neighbor u.
                let u = self.nbr[t][k];
                if u == NONE {
                    return Err(DiscretizeError::InvalidMesh("interior point on the boundary".into()));
                }
                let a = self.tris[t][k];
                let b = self.tris[t][(k + 1) % 3];
                let c = self.tris[t][(k + 2) % 3];
                let m = (0..3).find(|&m| self.nbr[u][m] == t).expect("symmetric links");
                let d = self.tris[u][m];
                let n_ab = self.nbr[t][(k + 2) % 3];
                let n_ca = self.nbr[t][(k + 1) % 3];
                // u = (d, c, b)
                let n_db = self.nbr[u][(m + 1) % 3];
                let n_cd = self.nbr[u][(m + 2) % 3];
                let t2 = self.tris.len();
                let t3 = t2 + 1;
                // t: (p, c, a), u: (p, a, b), t2: (p, b, d), t3: (p, d, c)
                self.tris[t] = [p, c, a];
                self.nbr[t] = [n_ca, u, t3];
                self.tris[u] = [p, a, b];
                self.nbr[u] = [n_ab, t2, t];
                self.tris.push([p, b, d]);
                self.nbr.push([n_db, t3, u]);
                self.tris.push([p, d, c]);
                self.nbr.push([n_cd, t, t2]);
                self.replace_nbr(n_ab, t, u);
                self.replace_nbr(n_db, u, t2);
                self.replace_nbr(n_cd, u, t3);
                stack.extend([t, u, t2, t3]);
            }
        }
        // New triangles carry p at index 0; legalize their outer edges.
        while let Some(t) = stack.pop() {
            if self.should_flip(t, 0) {
                let u = self.nbr[t][0];
                self.flip(t, 0);
                stack.push(t);
                stack.push(u);
            }
        }
        self.last = t;
        Ok(())
    }

    /// Edge opposite vertex `k` of `t` is not locally Delaunay and the
    /// surrounding quadrilateral is strictly convex.
    fn should_flip(&self, t: usize, k: usize) -> bool {
        let u = self.nbr[t][k];
        if u == NONE {
            return false;
        }
        let m = match (0..3).find(|&m| self.nbr[u][m] == t) {
            Some(m) => m,
            None => return false,
        };
        let a = self.p(t, k);
        let b = self.p(t, k + 1);
        let c = self.p(t, k + 2);
        let d = self.points[self.tris[u][m]];
        let s2 = self.scale * self.scale;
        if incircle(a, b, c, d) <= 1e-12 * s2 * s2 {
            return false;
        }
        let tol = 1e-12 * s2;
        orient(a, b, d) > tol && orient(a, d, c) > tol
    }

    /// Flip the edge opposite vertex `k` of `t`; afterwards `t = (a, b, d)`
    /// and the neighbor becomes `(a, d, c)`, both with `a` at index 0.
    fn flip(&mut self, t: usize, k: usize) {
        let u = self.nbr[t][k];
        let m = (0..3).find(|&m| self.nbr[u][m] == t).expect("symmetric links");
        let a = self.tris[t][k];
        let b = self.tris[t][(k + 1) % 3];
        let c = self.tris[t][(k + 2) % 3];
        let d = self.tris[u][m];
        let n_ab = self.nbr[t][(k + 2) % 3];
        let n_ca = self.nbr[t][(k + 1) % 3];
        let n_bd = self.nbr[u][(m + 1) % 3];
        let n_dc = self.nbr[u][(m + 2) % 3];
        self.tris[t] = [a, b, d];
        self.nbr[t] = [n_bd, u, n_ab];
        self.tris[u] = [a, d, c];
        self.nbr[u] = [n_dc, n_ca, t];
        self.replace_nbr(n_bd, u, t);
        self.replace_nbr(n_ca, t, u);
    }

    fn make_delaunay(&mut self) {
        let mut stack: Vec<(usize, usize)> = (0..self.tris.len())
            .flat_map(|t| (0..3).map(move |k| (t, k)))
            .collect();
        let mut budget = 50 * self.tris.len() + 1000;
        while let Some((t, k)) = stack.pop() {
            if budget == 0 {
                break;
            }
            if self.should_flip(t, k) {
                budget -= 1;
                let u = self.nbr[t][k];
                self.flip(t, k);
                for kk in 0..3 {
                    stack.push((t, kk));
                    stack.push((u, kk));
                }
            }
        }
    }

    /// One Laplacian pass over the free vertices; a move is kept only if
    /// every incident triangle stays positively oriented.
    fn smooth(&mut self, fixed: &[bool]) {
        let nv = self.points.len();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (t, tri) in self.tris.iter().enumerate() {
            for k in 0..3 {
                incident[tri[k]].push(t);
                nbrs[tri[k]].push(tri[(k + 1) % 3]);
                nbrs[tri[k]].push(tri[(k + 2) % 3]);
            }
        }
        let min_area = 1e-6 * self.scale * self.scale / nv as f64;
        for v in 0..nv {
            if fixed.get(v).copied().unwrap_or(false) {
                continue;
            }
            let ns = &mut nbrs[v];
            ns.sort_unstable();
            ns.dedup();
            if ns.is_empty() {
                continue;
            }
            let avg = ns
                .iter()
                .fold(Point::default(), |acc, &n| acc + self.points[n])
                * (1.0 / ns.len() as f64);
            let old = self.points[v];
            self.points[v] = avg;
            let ok = incident[v].iter().all(|&t| {
                let [a, b, c] = self.tris[t].map(|i| self.points[i]);
                0.5 * orient(a, b, c) > min_area
            });
            if !ok {
                self.points[v] = old;
            }
        }
    }
}
