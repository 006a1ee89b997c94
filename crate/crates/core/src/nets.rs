//! Maximal separated nets, Voronoi partitions of convex polygons and
//! covering multiplicities.
//!
//! Nets are built greedily over a regular probe grid scanned in row-major
//! order (first coordinate fastest). A probe point joins the net iff it is
//! at distance at least `r` from every point already chosen, so the result
//! is `r`-separated and maximal relative to the probe set.

use crate::geom::{BoxDomain, ConvexPolygon, GeomError, HalfPlane, Point};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Largest probe grid built for box domains.
pub const MAX_BOX_GRID_POINTS: usize = 10_000_000;

/// Interior margin used when counting covering depth.
pub const INTERIOR_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("probe step {probe_step} exceeds r/10 = {limit}")]
    ProbeTooCoarse { probe_step: f64, limit: f64 },
    #[error("sites {0} and {1} coincide")]
    DuplicateSites(usize, usize),
    #[error("site {0} lies outside the domain")]
    SiteOutside(usize),
    #[error("Voronoi cell of site {0} is empty")]
    EmptyCell(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Domain a net can be built in.
#[derive(Clone, Copy, Debug)]
pub enum NetDomain<'a> {
    Polygon(&'a ConvexPolygon),
    Box(&'a BoxDomain),
}

impl NetDomain<'_> {
    pub fn dim(&self) -> usize {
        match self {
            NetDomain::Polygon(_) => 2,
            NetDomain::Box(b) => b.dim(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            NetDomain::Polygon(p) => p.diameter(),
            NetDomain::Box(b) => b.diameter(),
        }
    }
}

/// An `r`-separated point set together with its verified covering radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    #[serde(rename = "r")]
    pub separation: f64,
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub cover_radius: f64,
    #[serde(default)]
    pub probe_step: f64,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Planar view of the points; `None` unless every point is 2D.
    pub fn planar(&self) -> Option<Vec<Point>> {
        self.points
            .iter()
            .map(|p| (p.len() == 2).then(|| Point::new(p[0], p[1])))
            .collect()
    }

    pub fn from_planar(points: &[Point], separation: f64) -> PointSet {
        PointSet {
            separation,
            points: points.iter().map(|p| vec![p.x, p.y]).collect(),
            cover_radius: f64::NAN,
            probe_step: 0.0,
        }
    }

    /// No probe point could be added without violating the separation.
    pub fn is_maximal_on(&self, probes: &[Point]) -> bool {
        let tol = 1e-12 * self.separation.max(1.0);
        probes.iter().all(|q| {
            self.points
                .iter()
                .any(|p| dist_nd(p, &[q.x, q.y]) < self.separation - tol)
        })
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                best = best.min(dist_nd(&self.points[i], &self.points[j]));
            }
        }
        best
    }
}

fn dist_nd(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A list of convex cells covering a polygon, with the covering
/// multiplicity and the generating sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub cells: Vec<ConvexPolygon>,
    pub sites: PointSet,
    pub multiplicity: usize,
}

impl Partition {
    /// Arbitrary convex covering; multiplicity is measured on a probe grid.
    pub fn from_cells(cells: Vec<ConvexPolygon>, probe_step: f64) -> Result<Self, NetError> {
        if cells.is_empty() {
            return Err(NetError::InvalidArgument("covering has no cells".into()));
        }
        let multiplicity = covering_multiplicity(&cells, probe_step)?;
        let centroids: Vec<Point> = cells.iter().map(ConvexPolygon::centroid).collect();
        Ok(Partition {
            sites: PointSet::from_planar(&centroids, 0.0),
            cells,
            multiplicity,
        })
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(ConvexPolygon::area).sum()
    }

    pub fn max_cell_diameter(&self) -> f64 {
        self.cells
            .iter()
            .map(ConvexPolygon::diameter)
            .fold(0.0, f64::max)
    }

    /// Largest pairwise overlap area between cells.
    pub fn max_pairwise_overlap(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.cells.len() {
            for j in i + 1..self.cells.len() {
                worst = worst.max(intersection_area(&self.cells[i], &self.cells[j]));
            }
        }
        worst
    }

    /// Every probe point of `domain` lies in some cell.
    pub fn covers(&self, domain: &ConvexPolygon, probe_step: f64) -> bool {
        let tol = 1e-9 * domain.bbox_diagonal();
        polygon_probe_points(domain, probe_step)
            .into_iter()
            .all(|q| self.cells.iter().any(|c| c.contains(q, tol)))
    }
}

/// Intersection of two convex polygons, if it has positive area.
pub fn intersect(a: &ConvexPolygon, b: &ConvexPolygon) -> Option<ConvexPolygon> {
    let mut cur = a.clone();
    for h in b.halfplanes() {
        cur = cur.clip(&h)?;
    }
    Some(cur)
}

fn intersection_area(a: &ConvexPolygon, b: &ConvexPolygon) -> f64 {
    intersect(a, b).map_or(0.0, |p| p.area())
}

fn grid_axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize + 1;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

/// Probe set of a polygon: bounding-box grid points inside it (row-major),
/// followed by boundary samples at spacing at most `step`.
pub fn polygon_probe_points(poly: &ConvexPolygon, step: f64) -> Vec<Point> {
    let (lo, hi) = poly.bbox();
    let tol = poly.eps();
    let xs = grid_axis(lo.x, hi.x, step);
    let ys = grid_axis(lo.y, hi.y, step);
    let mut pts = Vec::new();
    for &y in &ys {
        for &x in &xs {
            let q = Point::new(x, y);
            if poly.contains(q, tol) {
                pts.push(q);
            }
        }
    }
    for (a, b) in poly.edges() {
        let pieces = (a.dist(b) / step).ceil().max(1.0) as usize;
        for s in 0..pieces {
            pts.push(a + (b - a) * (s as f64 / pieces as f64));
        }
    }
    pts
}

/// Greedy maximal `r`-separated net over the probe grid of `domain`.
///
/// For boxes the grid spacing is enlarged when needed so that at most
/// [`MAX_BOX_GRID_POINTS`] probes are generated; the effective spacing is
/// recorded in the result.
pub fn maximal_separated_net(
    domain: NetDomain<'_>,
    r: f64,
    probe_step: f64,
) -> Result<PointSet, NetError> {
    if !(r > 0.0) || !(probe_step > 0.0) {
        return Err(NetError::InvalidArgument(format!(
            "r and probe_step must be positive (r = {r}, probe_step = {probe_step})"
        )));
    }
    let limit = r / 10.0;
    if probe_step > limit * (1.0 + 1e-12) {
        return Err(NetError::ProbeTooCoarse { probe_step, limit });
    }
    match domain {
        NetDomain::Polygon(poly) => polygon_net(poly, r, probe_step),
        NetDomain::Box(b) => Ok(box_net(b, r, probe_step)),
    }
}

fn polygon_net(poly: &ConvexPolygon, r: f64, step: f64) -> Result<PointSet, NetError> {
    let sep_tol = 1e-12 * r.max(poly.diameter());
    let rr = r - sep_tol;
    let mut chosen: Vec<Point> = Vec::new();
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: Point| ((p.x / r).floor() as i64, (p.y / r).floor() as i64);
    for q in polygon_probe_points(poly, step) {
        let (kx, ky) = key(q);
        let blocked = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                buckets
                    .get(&(kx + dx, ky + dy))
                    .is_some_and(|ids| ids.iter().any(|&i| chosen[i].dist(q) < rr))
            })
        });
        if !blocked {
            buckets.entry((kx, ky)).or_default().push(chosen.len());
            chosen.push(q);
        }
    }
    let cells = voronoi_cells(poly, &chosen)?;
    let cover_radius = cells
        .iter()
        .zip(&chosen)
        .flat_map(|(c, &s)| c.vertices().iter().map(move |v| v.dist(s)))
        .fold(0.0, f64::max);
    Ok(PointSet {
        separation: r,
        points: chosen.iter().map(|p| vec![p.x, p.y]).collect(),
        cover_radius,
        probe_step: step,
    })
}

fn box_net(b: &BoxDomain, r: f64, requested_step: f64) -> PointSet {
    let n = b.dim();
    let mut step = requested_step;
    let grid_size = |step: f64| -> f64 {
        b.lengths()
            .iter()
            .map(|&l| ((l / step) * (1.0 + 1e-12)).floor() + 1.0)
            .product()
    };
    while grid_size(step) > MAX_BOX_GRID_POINTS as f64 {
        step *= 1.01;
    }
    let axes: Vec<usize> = b
        .lengths()
        .iter()
        .map(|&l| ((l / step) * (1.0 + 1e-12)).floor() as usize + 1)
        .collect();
    let total: usize = axes.iter().product();
    let mut excluded = vec![false; total];
    let sep_tol = 1e-12 * r.max(b.diameter());
    let rr = r - sep_tol;

    let strides: Vec<usize> = axes
        .iter()
        .scan(1usize, |acc, &a| {
            let s = *acc;
            *acc *= a;
            Some(s)
        })
        .collect();
    let mut chosen: Vec<Vec<f64>> = Vec::new();
    let mut idx = vec![0usize; n];
    for flat in 0..total {
        if !excluded[flat] {
            let ball = BallMarker {
                axes: &axes,
                strides: &strides,
                center: &idx,
                step,
                rr2: rr * rr,
            };
            ball.mark(&mut excluded, n, 0, 0.0);
            chosen.push(idx.iter().map(|&i| i as f64 * step).collect());
        }
        for d in 0..n {
            idx[d] += 1;
            if idx[d] < axes[d] {
                break;
            }
            idx[d] = 0;
        }
    }
    // Every box point is within step·√n/... of a probe point; bound it by step·√n.
    PointSet {
        separation: r,
        points: chosen,
        cover_radius: r + step * (n as f64).sqrt(),
        probe_step: step,
    }
}

/// Marks grid points strictly closer than `sqrt(rr2)` to `center`,
/// pruning each axis range by the squared distance already accumulated.
struct BallMarker<'a> {
    axes: &'a [usize],
    strides: &'a [usize],
    center: &'a [usize],
    step: f64,
    rr2: f64,
}

impl BallMarker<'_> {
    fn mark(&self, excluded: &mut [bool], dims_left: usize, base: usize, d2: f64) {
        if dims_left == 0 {
            excluded[base] = true;
            return;
        }
        let d = dims_left - 1;
        let room = self.rr2 - d2;
        let reach = (room.max(0.0).sqrt() / self.step).ceil() as usize;
        let c = self.center[d];
        let lo = c.saturating_sub(reach);
        let hi = (c + reach).min(self.axes[d] - 1);
        for i in lo..=hi {
            let x = (i as f64 - c as f64) * self.step;
            let nd2 = d2 + x * x;
            if nd2 < self.rr2 {
                self.mark(excluded, d, base + i * self.strides[d], nd2);
            }
        }
    }
}

/// Voronoi cells of `sites` clipped to `poly`, one per site in order.
pub fn voronoi_cells(poly: &ConvexPolygon, sites: &[Point]) -> Result<Vec<ConvexPolygon>, NetError> {
    let eps = poly.eps();
    for (i, &s) in sites.iter().enumerate() {
        if !poly.contains(s, 1e-9) {
            return Err(NetError::SiteOutside(i));
        }
    }
    let mut cells = Vec::with_capacity(sites.len());
    let mut order: Vec<usize> = (0..sites.len()).collect();
    for (i, &si) in sites.iter().enumerate() {
        order.sort_by(|&a, &b| si.dist(sites[a]).total_cmp(&si.dist(sites[b])));
        let mut cell = poly.clone();
        let mut reach = far_vertex_distance(&cell, si);
        for &j in &order {
            if j == i {
                continue;
            }
            let d = si.dist(sites[j]);
            if d <= 1e-12 {
                return Err(NetError::DuplicateSites(i.min(j), i.max(j)));
            }
            // Bisector lies beyond every point of the cell.
            if 0.5 * d > reach + eps {
                break;
            }
            let h = HalfPlane::bisector(si, sites[j])?;
            cell = cell.clip(&h).ok_or(NetError::EmptyCell(i))?;
            reach = far_vertex_distance(&cell, si);
        }
        cells.push(cell);
    }
    Ok(cells)
}

fn far_vertex_distance(cell: &ConvexPolygon, s: Point) -> f64 {
    cell.vertices().iter().map(|v| v.dist(s)).fold(0.0, f64::max)
}

/// Voronoi partition of `poly` generated by planar `sites`.
pub fn voronoi_partition(poly: &ConvexPolygon, sites: &PointSet) -> Result<Partition, NetError> {
    let planar = sites
        .planar()
        .ok_or_else(|| NetError::InvalidArgument("Voronoi sites must be 2D".into()))?;
    if planar.is_empty() {
        return Err(NetError::InvalidArgument("no sites".into()));
    }
    let cells = voronoi_cells(poly, &planar)?;
    Ok(Partition {
        cells,
        sites: sites.clone(),
        // Voronoi cells are interior-disjoint.
        multiplicity: 1,
    })
}

/// Maximum number of cells containing a probe point in their interior
/// (margin [`INTERIOR_TOL`]). Probes are the bounding-box grid of the union
/// plus the centroid of every overlapping pair; never less than 1.
pub fn covering_multiplicity(cells: &[ConvexPolygon], probe_step: f64) -> Result<usize, NetError> {
    if cells.is_empty() {
        return Err(NetError::InvalidArgument("no cells".into()));
    }
    if !(probe_step > 0.0) {
        return Err(NetError::InvalidArgument("probe_step must be positive".into()));
    }
    let depth = |q: Point| cells.iter().filter(|c| c.contains(q, -INTERIOR_TOL)).count();
    let (mut lo, mut hi) = cells[0].bbox();
    for c in &cells[1..] {
        let (a, b) = c.bbox();
        lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
        hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
    }
    let mut best = 1usize;
    for y in grid_axis(lo.y, hi.y, probe_step) {
        for x in grid_axis(lo.x, hi.x, probe_step) {
            best = best.max(depth(Point::new(x, y)));
        }
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if let Some(common) = intersect(&cells[i], &cells[j]) {
                best = best.max(depth(common.centroid()));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> ConvexPolygon {
        ConvexPolygon::unit_square()
    }

    #[test]
    fn net_of_large_radius_is_single_point() {
        let net = maximal_separated_net(NetDomain::Polygon(&sq()), 2.0, 0.2).unwrap();
        assert_eq!(net.len(), 1);
        assert_eq!(net.points[0], vec![0.0, 0.0]);
    }

    #[test]
    fn half_unit_greedy_net() {
        let net = maximal_separated_net(NetDomain::Polygon(&sq()), 0.5, 0.05).unwrap();
        // row-major greedy: three points on y = 0, two staggered on y = 0.45, three on y = 0.9
        assert_eq!(net.len(), 8);
        assert_eq!(net.points[3], vec![0.25, 0.45]);
        assert!(net.min_pairwise_distance() >= 0.5 - 1e-12);
        let probes = polygon_probe_points(&sq(), 0.05);
        assert!(net.is_maximal_on(&probes));
        assert!(net.cover_radius >= 0.5 * 0.5 && net.cover_radius <= 0.5 + 0.05 * 2f64.sqrt());
    }

    #[test]
    fn three_by_three_grid_is_a_maximal_net() {
        let mut pts = Vec::new();
        for y in [0.0, 0.5, 1.0] {
            for x in [0.0, 0.5, 1.0] {
                pts.push(Point::new(x, y));
            }
        }
        let grid = PointSet::from_planar(&pts, 0.5);
        assert!(grid.min_pairwise_distance() >= 0.5);
        assert!(grid.is_maximal_on(&polygon_probe_points(&sq(), 0.01)));
        let cells = voronoi_partition(&sq(), &grid).unwrap();
        let cover = cells
            .cells
            .iter()
            .zip(&pts)
            .flat_map(|(c, &s)| c.vertices().iter().map(move |v| v.dist(s)))
            .fold(0.0, f64::max);
        assert!((cover - 2f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn net_size_within_packing_bounds() {
        for step in [0.05, 0.03125, 0.01] {
            let net = maximal_separated_net(NetDomain::Polygon(&sq()), 0.5, step).unwrap();
            assert!((4..=9).contains(&net.len()), "{} points", net.len());
        }
    }

    #[test]
    fn one_dimensional_box_net() {
        let b = BoxDomain::new(vec![10.0]).unwrap();
        let net = maximal_separated_net(NetDomain::Box(&b), 1.0, 0.1).unwrap();
        assert!(net.len() == 10 || net.len() == 11);
        // brute-force greedy on the same grid
        let mut oracle: Vec<f64> = Vec::new();
        for i in 0..=100 {
            let x = i as f64 * 0.1;
            if oracle.iter().all(|&c| (x - c).abs() >= 1.0 - 1e-9) {
                oracle.push(x);
            }
        }
        assert_eq!(net.len(), oracle.len());
    }

    #[test]
    fn probe_too_coarse() {
        let err = maximal_separated_net(NetDomain::Polygon(&sq()), 0.5, 0.06).unwrap_err();
        assert!(matches!(err, NetError::ProbeTooCoarse { .. }));
    }

    #[test]
    fn box_net_matches_polygon_net_on_square() {
        let b = BoxDomain::cube(2, 1.0).unwrap();
        let bn = maximal_separated_net(NetDomain::Box(&b), 0.3, 0.025).unwrap();
        let pn = maximal_separated_net(NetDomain::Polygon(&sq()), 0.3, 0.025).unwrap();
        assert_eq!(bn.len(), pn.len());
        assert!(bn.min_pairwise_distance() >= 0.3 - 1e-12);
    }

    #[test]
    fn box_grid_cap_enlarges_step() {
        let b = BoxDomain::cube(6, 1.0).unwrap();
        let net = maximal_separated_net(NetDomain::Box(&b), 0.5, 0.05).unwrap();
        assert!(net.probe_step > 0.05);
        assert!(net.min_pairwise_distance() >= 0.5 - 1e-12);
        assert!(net.len() >= 2);
    }

    #[test]
    fn voronoi_single_site() {
        let sites = PointSet::from_planar(&[Point::new(0.3, 0.3)], 1.0);
        let part = voronoi_partition(&sq(), &sites).unwrap();
        assert_eq!(part.cells, vec![sq()]);
    }

    #[test]
    fn voronoi_two_and_four_sites() {
        let two = PointSet::from_planar(&[Point::new(0.25, 0.5), Point::new(0.75, 0.5)], 0.5);
        let part = voronoi_partition(&sq(), &two).unwrap();
        for c in &part.cells {
            assert!((c.area() - 0.5).abs() < 1e-14);
        }
        let four: Vec<Point> = [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect();
        let part = voronoi_partition(&sq(), &PointSet::from_planar(&four, 0.5)).unwrap();
        for c in &part.cells {
            assert!((c.area() - 0.25).abs() < 1e-14);
            assert!((c.diameter() - 2f64.sqrt() / 2.0).abs() < 1e-14);
        }
        assert_eq!(covering_multiplicity(&part.cells, 0.01).unwrap(), 1);
    }

    #[test]
    fn voronoi_errors() {
        let dup = PointSet::from_planar(&[Point::new(0.5, 0.5), Point::new(0.5, 0.5)], 0.1);
        assert!(matches!(
            voronoi_partition(&sq(), &dup),
            Err(NetError::DuplicateSites(0, 1))
        ));
        let out = PointSet::from_planar(&[Point::new(2.0, 0.5)], 0.1);
        assert!(matches!(voronoi_partition(&sq(), &out), Err(NetError::SiteOutside(0))));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(covering_multiplicity(&[sq(), sq()], 0.05).unwrap(), 2);
        let a = ConvexPolygon::rectangle(0.0, 0.0, 0.6, 1.0).unwrap();
        let b = ConvexPolygon::rectangle(0.4, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(covering_multiplicity(&[a.clone(), b.clone()], 0.05).unwrap(), 2);
        // overlap thinner than the probe grid is still found through the pair centroid
        let c = ConvexPolygon::rectangle(0.59, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(covering_multiplicity(&[a, c], 0.25).unwrap(), 2);
        let left = ConvexPolygon::rectangle(0.0, 0.0, 0.5, 1.0).unwrap();
        let right = ConvexPolygon::rectangle(0.5, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(covering_multiplicity(&[left, right], 0.05).unwrap(), 1);
    }

    #[test]
    fn pointset_json_shape() {
        let ps = PointSet::from_planar(&[Point::new(0.0, 1.0)], 0.5);
        let v: serde_json::Value = serde_json::to_value(&ps).unwrap();
        assert_eq!(v["r"], 0.5);
        assert_eq!(v["points"][0][1], 1.0);
        let back: PointSet = serde_json::from_str(r#"{"r": 0.25, "points": [[0,0],[1,0]]}"#).unwrap();
        assert_eq!(back.len(), 2);
    }
}
