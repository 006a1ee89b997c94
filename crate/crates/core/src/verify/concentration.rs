//! Concentration of the uniform measure away from the Dirichlet boundary.

use super::{CheckReport, CheckRow, Provenance, VerifyError, FEM_SLACK};
use crate::discretize::BoundarySpec;
use crate::fem::{polygon_spectrum, FemOptions};
use crate::geom::{ConvexPolygon, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

/// Fraction of `P` at distance more than `r` from the Dirichlet set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConcentrationLhs {
    Exact(f64),
    MonteCarlo {
        value: f64,
        standard_error: f64,
        samples: usize,
        seed: u64,
    },
}

impl ConcentrationLhs {
    pub fn value(&self) -> f64 {
        match *self {
            ConcentrationLhs::Exact(v) => v,
            ConcentrationLhs::MonteCarlo { value, .. } => value,
        }
    }

    pub fn standard_error(&self) -> f64 {
        match *self {
            ConcentrationLhs::Exact(_) => 0.0,
            ConcentrationLhs::MonteCarlo { standard_error, .. } => standard_error,
        }
    }
}

/// A piece of the Dirichlet boundary lying on a single polygon edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirichletPiece {
    pub edge: usize,
    pub a: Point,
    pub b: Point,
    pub full_edge: bool,
}

/// The Dirichlet part of `∂P` (the closure of the complement of the Neumann
/// intervals), split at the polygon vertices.
pub fn dirichlet_segments(p: &ConvexPolygon, spec: &BoundarySpec) -> Vec<DirichletPiece> {
    let edges: Vec<(Point, Point)> = p.edges().collect();
    let mut starts = vec![0.0];
    for (a, b) in &edges {
        starts.push(starts.last().unwrap() + a.dist(*b));
    }
    let perimeter = *starts.last().unwrap();
    let tol = 1e-12 * perimeter;
    let arcs: Vec<[f64; 2]> = match spec {
        BoundarySpec::AllNeumann => Vec::new(),
        BoundarySpec::AllDirichlet => vec![[0.0, perimeter]],
        BoundarySpec::Neumann(ivs) => {
            let mut ivs = ivs.clone();
            ivs.sort_by(|a, b| a[0].total_cmp(&b[0]));
            let mut gaps = Vec::new();
            let mut cursor = 0.0;
            for iv in &ivs {
                if iv[0] > cursor + tol {
                    gaps.push([cursor, iv[0]]);
                }
                cursor = cursor.max(iv[1]);
            }
            if perimeter > cursor + tol {
                gaps.push([cursor, perimeter]);
            }
            gaps
        }
    };
    let mut pieces = Vec::new();
    for arc in arcs {
        for (i, &(a, b)) in edges.iter().enumerate() {
            let (s0, s1) = (starts[i], starts[i + 1]);
            let lo = arc[0].max(s0);
            let hi = arc[1].min(s1);
            // Corners shared with a neighbouring piece add nothing.
            if hi <= lo + tol {
                continue;
            }
            let len = s1 - s0;
            let at = |s: f64| a + (b - a) * ((s - s0) / len).clamp(0.0, 1.0);
            pieces.push(DirichletPiece {
                edge: i,
                a: at(lo),
                b: at(hi),
                full_edge: lo <= s0 + tol && hi >= s1 - tol,
            });
        }
    }
    pieces
}

fn segment_distance(q: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    if len2 == 0.0 {
        return q.dist(a);
    }
    let t = ((q - a).dot(e) / len2).clamp(0.0, 1.0);
    q.dist(a + e * t)
}

/// Exact value for axis-aligned rectangles whose Dirichlet set is a union
/// of whole edges: every edge then pushes its opposite side inward by `r`.
fn rectangle_closed_form(p: &ConvexPolygon, pieces: &[DirichletPiece], r: f64) -> Option<f64> {
    let v = p.vertices();
    let axis_aligned = v.len() == 4
        && p.edges().all(|(a, b)| (a.x - b.x).abs() <= p.eps() || (a.y - b.y).abs() <= p.eps());
    if !axis_aligned || pieces.iter().any(|q| !q.full_edge) {
        return None;
    }
    let (lo, hi) = p.bbox();
    let (mut x0, mut x1, mut y0, mut y1) = (lo.x, hi.x, lo.y, hi.y);
    for q in pieces {
        let mid = (q.a + q.b) * 0.5;
        let d = [mid.x - lo.x, hi.x - mid.x, mid.y - lo.y, hi.y - mid.y];
        let side = (0..4).min_by(|&i, &j| d[i].total_cmp(&d[j])).unwrap();
        match side {
            0 => x0 = lo.x + r,
            1 => x1 = hi.x - r,
            2 => y0 = lo.y + r,
            _ => y1 = hi.y - r,
        }
    }
    Some(((x1 - x0).max(0.0) * (y1 - y0).max(0.0)) / p.area())
}

/// Uniform samples in `P` from a fan triangulation.
fn sample_uniform(p: &ConvexPolygon, samples: usize, seed: u64) -> Vec<Point> {
    let v = p.vertices();
    let mut cumulative = Vec::with_capacity(v.len() - 2);
    let mut total = 0.0;
    for i in 1..v.len() - 1 {
        total += 0.5 * (v[i] - v[0]).cross(v[i + 1] - v[0]);
        cumulative.push(total);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let pick = rng.random::<f64>() * total;
            let t = cumulative.partition_point(|&c| c < pick).min(cumulative.len() - 1);
            let (a, b, c) = (v[0], v[t + 1], v[t + 2]);
            let (mut s, mut u) = (rng.random::<f64>(), rng.random::<f64>());
            if s + u > 1.0 {
                s = 1.0 - s;
                u = 1.0 - u;
            }
            a + (b - a) * s + (c - a) * u
        })
        .collect()
}

/// Left-hand sides for each radius in `rs`, sharing one Monte Carlo sample
/// when no exact formula applies.
pub fn concentration_lhs(
    p: &ConvexPolygon,
    spec: &BoundarySpec,
    rs: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<ConcentrationLhs>, VerifyError> {
    if rs.iter().any(|&r| !(r > 0.0)) {
        return Err(VerifyError::InvalidArgument("radii must be positive".into()));
    }
    if matches!(spec, BoundarySpec::AllDirichlet) {
        let area = p.area();
        return Ok(rs
            .iter()
            .map(|&r| ConcentrationLhs::Exact(p.erode(r).map_or(0.0, |e| e.area() / area)))
            .collect());
    }
    let pieces = dirichlet_segments(p, spec);
    if pieces.is_empty() {
        return Err(VerifyError::InvalidArgument("boundary has no Dirichlet part".into()));
    }
    if let Some(exact) = rs
        .iter()
        .map(|&r| rectangle_closed_form(p, &pieces, r).map(ConcentrationLhs::Exact))
        .collect::<Option<Vec<_>>>()
    {
        return Ok(exact);
    }
    if samples < 2 {
        return Err(VerifyError::InvalidArgument("need at least two samples".into()));
    }
    let dist: Vec<f64> = sample_uniform(p, samples, seed)
        .into_iter()
        .map(|q| pieces.iter().map(|s| segment_distance(q, s.a, s.b)).fold(f64::INFINITY, f64::min))
        .collect();
    Ok(rs
        .iter()
        .map(|&r| {
            let hits = dist.iter().filter(|&&d| d > r).count();
            let f = hits as f64 / samples as f64;
            ConcentrationLhs::MonteCarlo {
                value: f,
                standard_error: (f * (1.0 - f) / samples as f64).sqrt(),
                samples,
                seed,
            }
        })
        .collect())
}

fn concentration_report(
    check: &str,
    inputs: serde_json::Value,
    r: f64,
    lhs: ConcentrationLhs,
    lambda: f64,
    u: f64,
    h: Option<f64>,
) -> CheckReport {
    let root = lambda.sqrt();
    let rhs = (1.0 - root * r).exp();
    // rhs moves by about r√λ/2 times the relative change of λ.
    let tol = 4.0 * lhs.standard_error() + rhs * 0.5 * FEM_SLACK * u * root * r + 1e-12;
    let mut prov = Provenance {
        h,
        fem_uncertainty: h.map(|_| u),
        ..Provenance::default()
    };
    if let ConcentrationLhs::MonteCarlo {
        standard_error,
        samples,
        seed,
        ..
    } = lhs
    {
        prov.mc_samples = Some(samples);
        prov.mc_standard_error = Some(standard_error);
        prov.seed = Some(seed);
    }
    let row = CheckRow::le(lhs.value(), rhs, tol).with_value(lambda);
    CheckReport::from_rows(check, inputs, vec![row], true)
        .with_index_base(1)
        .with_provenance(prov)
}

/// `area(P ∖ B_r(∂P)) / area(P) ≤ exp(1 − √λ₁ r)` for a given first
/// Dirichlet eigenvalue `λ₁` with relative uncertainty `u`.
pub fn boundary_concentration_from(p: &ConvexPolygon, r: f64, lambda1: f64, u: f64, h: Option<f64>) -> CheckReport {
    let lhs = ConcentrationLhs::Exact(p.erode(r).map_or(0.0, |e| e.area() / p.area()));
    concentration_report(
        "boundary_concentration",
        json!({"polygon": p, "r": r, "h": h}),
        r,
        lhs,
        lambda1,
        u,
        h,
    )
}

pub fn boundary_concentration_check(p: &ConvexPolygon, r: f64, h: f64) -> Result<CheckReport, VerifyError> {
    if !(r > 0.0) {
        return Err(VerifyError::InvalidArgument(format!("r = {r}")));
    }
    let s = polygon_spectrum(p, &BoundarySpec::AllDirichlet, 1, &FemOptions::new(h))?;
    Ok(boundary_concentration_from(p, r, s.eigenvalues[0], s.uncertainty_of(1), s.h))
}

/// Mixed version with distances measured to the Dirichlet part only, for a
/// given first mixed eigenvalue.
#[allow(clippy::too_many_arguments)]
pub fn mixed_concentration_from(
    p: &ConvexPolygon,
    spec: &BoundarySpec,
    rs: &[f64],
    lambda1: f64,
    u: f64,
    h: Option<f64>,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckReport>, VerifyError> {
    let lhs = concentration_lhs(p, spec, rs, samples, seed)?;
    let name = if matches!(spec, BoundarySpec::AllDirichlet) {
        "boundary_concentration"
    } else {
        "mixed_concentration"
    };
    Ok(rs
        .iter()
        .zip(lhs)
        .map(|(&r, l)| {
            let inputs = json!({"polygon": p, "spec": spec, "r": r, "h": h, "samples": samples, "seed": seed});
            concentration_report(name, inputs, r, l, lambda1, u, h)
        })
        .collect())
}

/// Runs the mixed check for several radii with one eigenvalue solve.
pub fn mixed_concentration_sweep(
    p: &ConvexPolygon,
    spec: &BoundarySpec,
    rs: &[f64],
    h: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckReport>, VerifyError> {
    if matches!(spec, BoundarySpec::AllNeumann) {
        return Err(VerifyError::InvalidArgument("boundary has no Dirichlet part".into()));
    }
    let s = polygon_spectrum(p, spec, 1, &FemOptions::new(h))?;
    mixed_concentration_from(p, spec, rs, s.eigenvalues[0], s.uncertainty_of(1), s.h, samples, seed)
}

pub fn mixed_concentration_check(
    p: &ConvexPolygon,
    spec: &BoundarySpec,
    r: f64,
    h: f64,
    samples: usize,
    seed: u64,
) -> Result<CheckReport, VerifyError> {
    Ok(mixed_concentration_sweep(p, spec, &[r], h, samples, seed)?.remove(0))
}
