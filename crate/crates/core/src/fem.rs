//! Polygon spectra from P1 finite elements with a refinement-based
//! uncertainty estimate.

use crate::discretize::{assemble, reduce_system, triangulate_with, BoundarySpec, DiscretizeError, Mesh, MeshOptions};
use crate::eigsolve::{smallest_eigpairs, EigenError, EigenOptions};
use crate::geom::ConvexPolygon;
use crate::spectrum::{BcMode, Domain, Spectrum};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("requested {requested} eigenvalues but only {available} degrees of freedom")]
    TooFewDofs { requested: usize, available: usize },
}

#[derive(Clone, Debug)]
pub struct FemOptions {
    pub h: f64,
    /// Also solve on the uniformly refined mesh and report the refined
    /// values with `(λ(h) - λ(h/2)) / λ(h/2)` as uncertainty.
    pub refine: bool,
    pub mesh: MeshOptions,
    pub eigen: EigenOptions,
}

impl FemOptions {
    pub fn new(h: f64) -> Self {
        FemOptions {
            h,
            refine: true,
            mesh: MeshOptions::default(),
            eigen: EigenOptions::default(),
        }
    }

    pub fn single(h: f64) -> Self {
        FemOptions {
            refine: false,
            ..Self::new(h)
        }
    }
}

pub fn bc_mode_of(spec: &BoundarySpec) -> BcMode {
    match spec {
        BoundarySpec::AllNeumann => BcMode::Neumann,
        BoundarySpec::AllDirichlet => BcMode::Dirichlet,
        BoundarySpec::Neumann(_) => BcMode::Mixed,
    }
}

/// Eigenvalues of one tagged mesh.
pub fn mesh_eigenvalues(mesh: &Mesh, count: usize, eigen: &EigenOptions) -> Result<(Vec<f64>, Vec<f64>), FemError> {
    let (k, m) = assemble(mesh)?;
    let (k, m, _) = reduce_system(&k, &m, mesh)?;
    if count > k.n {
        return Err(FemError::TooFewDofs {
            requested: count,
            available: k.n,
        });
    }
    let pairs = smallest_eigpairs(&k, &m, count, eigen)?;
    Ok((pairs.values, pairs.residuals))
}

/// The `count` smallest eigenvalues of the Laplacian on `poly` with the
/// given boundary conditions, indexed per the resulting [`BcMode`].
pub fn polygon_spectrum(
    poly: &ConvexPolygon,
    spec: &BoundarySpec,
    count: usize,
    opts: &FemOptions,
) -> Result<Spectrum, FemError> {
    let mesh = triangulate_with(poly, opts.h, opts.mesh)?.tag_boundary(spec);
    let (coarse, coarse_res) = mesh_eigenvalues(&mesh, count, &opts.eigen)?;
    let bc_mode = bc_mode_of(spec);
    let domain = Domain::Polygon {
        vertices: poly.vertices().to_vec(),
    };
    let mut s = if opts.refine {
        let fine_mesh = mesh.refine();
        let (fine, fine_res) = mesh_eigenvalues(&fine_mesh, count, &opts.eigen)?;
        let scale = fine.last().copied().unwrap_or(1.0).abs().max(f64::MIN_POSITIVE);
        let uncertainty = coarse
            .iter()
            .zip(&fine)
            .map(|(&c, &f)| {
                // The discrete constant mode carries no uncertainty.
                if f.abs() <= 1e-8 * scale {
                    0.0
                } else {
                    ((c - f) / f).abs()
                }
            })
            .collect();
        let mut s = Spectrum::new(domain, bc_mode, fine);
        s.h = Some(opts.h / 2.0);
        s.residuals = fine_res;
        s.uncertainty = uncertainty;
        s
    } else {
        let mut s = Spectrum::new(domain, bc_mode, coarse);
        s.h = Some(opts.h);
        s.residuals = coarse_res;
        s
    };
    if bc_mode == BcMode::Neumann {
        // The constant mode is exactly zero; the solver returns roundoff.
        if let Some(l0) = s.eigenvalues.first_mut() {
            *l0 = l0.max(0.0);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn richardson_on_unit_square() {
        let sq = ConvexPolygon::unit_square();
        let s = polygon_spectrum(&sq, &BoundarySpec::AllNeumann, 4, &FemOptions::new(0.04)).unwrap();
        assert_eq!(s.index_base, 0);
        assert_eq!(s.h, Some(0.02));
        let l1 = s.lambda(1).unwrap();
        assert!(l1 > PI * PI);
        // The refined error is about a quarter of the step size.
        let err = (l1 - PI * PI) / (PI * PI);
        let u = s.uncertainty_of(1);
        assert!(err < u && err > 0.2 * u, "err {err} u {u}");
        assert_eq!(s.uncertainty_of(0), 0.0);
    }

    #[test]
    fn dirichlet_is_one_based() {
        let sq = ConvexPolygon::unit_square();
        let s = polygon_spectrum(&sq, &BoundarySpec::AllDirichlet, 2, &FemOptions::single(0.05)).unwrap();
        assert_eq!(s.bc_mode, BcMode::Dirichlet);
        assert!(s.lambda(1).unwrap() > 2.0 * PI * PI);
        assert_eq!(s.lambda(0), None);
    }

    #[test]
    fn too_few_dofs() {
        let sq = ConvexPolygon::unit_square();
        let r = polygon_spectrum(&sq, &BoundarySpec::AllDirichlet, 50, &FemOptions::single(0.5));
        assert!(matches!(r, Err(FemError::TooFewDofs { .. })));
    }
}
