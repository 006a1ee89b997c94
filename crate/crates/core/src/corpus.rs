//! Seeded random instances and experiment configuration.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, so a seed names
//! the same instance on every platform.

use crate::geom::{ConvexPolygon, GeomError, HalfPlane, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::PathBuf;
use thiserror::Error;

pub const MAX_DRAWS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("no valid instance after {0} draws")]
    GenerationFailed(usize),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the disk of radius `r` about the origin.
pub fn point_in_disk<R: Rng>(rng: &mut R, r: f64) -> Point {
    let rho = r * rng.random::<f64>().sqrt();
    let phi = 2.0 * PI * rng.random::<f64>();
    Point::new(rho * phi.cos(), rho * phi.sin())
}

/// Uniform point in a convex polygon via its fan triangulation.
pub fn point_in_polygon<R: Rng>(rng: &mut R, p: &ConvexPolygon) -> Point {
    let v = p.vertices();
    let areas: Vec<f64> = (1..v.len() - 1)
        .map(|i| 0.5 * (v[i] - v[0]).cross(v[i + 1] - v[0]))
        .collect();
    let mut pick = rng.random::<f64>() * areas.iter().sum::<f64>();
    let mut t = areas.len() - 1;
    for (i, a) in areas.iter().enumerate() {
        if pick < *a {
            t = i;
            break;
        }
        pick -= a;
    }
    let (mut s, mut u) = (rng.random::<f64>(), rng.random::<f64>());
    if s + u > 1.0 {
        s = 1.0 - s;
        u = 1.0 - u;
    }
    v[0] + (v[t + 1] - v[0]) * s + (v[t + 2] - v[0]) * u
}

pub const DEFAULT_VERTEX_RANGE: [usize; 2] = [8, 16];

/// Convex hull of `range[0]..=range[1]` uniform points in the unit disk.
pub fn random_polygon<R: Rng>(rng: &mut R, range: [usize; 2]) -> Result<ConvexPolygon, CorpusError> {
    for _ in 0..MAX_DRAWS {
        let m = rng.random_range(range[0].max(3)..=range[1].max(3));
        let pts: Vec<Point> = (0..m).map(|_| point_in_disk(rng, 1.0)).collect();
        if let Ok(p) = ConvexPolygon::new(&pts) {
            if p.area() > 1e-3 {
                return Ok(p);
            }
        }
    }
    Err(CorpusError::GenerationFailed(MAX_DRAWS))
}

fn clip_once<R: Rng>(rng: &mut R, p: &ConvexPolygon) -> Result<Option<ConvexPolygon>, GeomError> {
    let through = point_in_polygon(rng, p);
    let phi = 2.0 * PI * rng.random::<f64>();
    let normal = Point::new(phi.cos(), phi.sin());
    let h = HalfPlane::new(normal, normal.dot(through))?;
    Ok(p.clip(&h))
}

/// A nested pair `Ω ⊆ Ω'`: `Ω'` from [`random_polygon`] and `Ω` from one to
/// four clips of `Ω'` by half-planes through interior points, keeping at
/// least 1% of the area.
pub fn generate_nested_pair(seed: u64) -> Result<(ConvexPolygon, ConvexPolygon), CorpusError> {
    generate_nested_pair_with(seed, DEFAULT_VERTEX_RANGE)
}

pub fn generate_nested_pair_with(
    seed: u64,
    vertex_range: [usize; 2],
) -> Result<(ConvexPolygon, ConvexPolygon), CorpusError> {
    let mut rng = rng(seed);
    for _ in 0..MAX_DRAWS {
        let outer = random_polygon(&mut rng, vertex_range)?;
        let clips = rng.random_range(1..=4);
        let mut inner = Some(outer.clone());
        for _ in 0..clips {
            inner = match inner {
                Some(p) => clip_once(&mut rng, &p).ok().flatten(),
                None => None,
            };
        }
        if let Some(inner) = inner {
            if inner.area() >= 0.01 * outer.area() && outer.contains_polygon(&inner) {
                return Ok((inner, outer));
            }
        }
    }
    Err(CorpusError::GenerationFailed(MAX_DRAWS))
}

/// Parameters of a batch run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub corpus_size: usize,
    pub vertex_range: [usize; 2],
    pub kmax: usize,
    pub h: f64,
    pub dims: Vec<usize>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            corpus_size: 50,
            vertex_range: DEFAULT_VERTEX_RANGE,
            kmax: 10,
            h: 0.04,
            dims: vec![2, 3, 4, 5],
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |m: &str| Err(CorpusError::InvalidConfig(m.to_string()));
        if self.corpus_size == 0 || self.kmax == 0 {
            return bad("counts must be positive");
        }
        if !(self.h > 0.0) {
            return bad("h must be positive");
        }
        if self.vertex_range[0] < 3 || self.vertex_range[0] > self.vertex_range[1] {
            return bad("vertex range must satisfy 3 ≤ lo ≤ hi");
        }
        if self.dims.iter().any(|&d| d == 0 || d > 8) {
            return bad("dimensions must lie in 1..=8");
        }
        Ok(())
    }

    /// Seed of the `i`-th corpus instance.
    pub fn instance_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }
}
