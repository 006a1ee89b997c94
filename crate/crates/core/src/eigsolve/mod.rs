//! Smallest eigenpairs of `K u = λ M u` for sparse symmetric `K`, `M`.
//!
//! Large systems use block shift-invert Krylov iteration on a sparse
//! Cholesky factor of `K - σM` with a small negative shift, so singular
//! Neumann stiffness matrices are handled; small systems are solved densely.

mod cholesky;
mod krylov;
pub mod ordering;

pub use cholesky::{NotPositiveDefinite, SparseCholesky};

use crate::discretize::SparseSymMatrix;
use crate::spectrum::{BcMode, Domain, Spectrum};
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("no convergence after {iterations} restarts (worst residual {worst_residual:e})")]
    NoConvergence { iterations: usize, worst_residual: f64 },
    #[error("factorization failed: {0}")]
    FactorizationFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    pub tol: f64,
    pub block: usize,
    /// Extra eigenpairs carried along so clusters are not split at the cut.
    pub extra: usize,
    pub max_restarts: usize,
    /// Systems up to this size are solved densely.
    pub dense_threshold: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: DEFAULT_TOL,
            block: 4,
            extra: 4,
            max_restarts: 100,
            dense_threshold: 300,
            seed: DEFAULT_SEED,
        }
    }
}

/// Eigenvalues ascending, with M-normalized eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

pub fn smallest_eigpairs(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
    opts: &EigenOptions,
) -> Result<EigenPairs, EigenError> {
    if k.n != m.n {
        return Err(EigenError::InvalidArgument("K and M differ in size".into()));
    }
    if count == 0 || count > k.n {
        return Err(EigenError::InvalidArgument(format!(
            "count {count} must be in 1..={}",
            k.n
        )));
    }
    if k.n <= opts.dense_threshold {
        krylov::solve_dense(k, m, count)
    } else {
        krylov::solve(k, m, count, opts)
    }
}

/// The `count` smallest eigenvalues as a [`Spectrum`] of the given mode.
pub fn smallest_eigs(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
    tol: f64,
    bc_mode: BcMode,
) -> Result<Spectrum, EigenError> {
    let opts = EigenOptions {
        tol,
        ..EigenOptions::default()
    };
    let pairs = smallest_eigpairs(k, m, count, &opts)?;
    let mut s = Spectrum::new(Domain::Matrix { n: k.n }, bc_mode, pairs.values);
    s.residuals = pairs.residuals;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{assemble, reduce_system, triangulate, BoundarySpec};
    use crate::geom::ConvexPolygon;
    use std::f64::consts::PI;

    fn square(h: f64, spec: BoundarySpec) -> (SparseSymMatrix, SparseSymMatrix) {
        let sq = ConvexPolygon::unit_square();
        let mesh = triangulate(&sq, h).unwrap().tag_boundary(&spec);
        let (k, m) = assemble(&mesh).unwrap();
        let (k, m, _) = reduce_system(&k, &m, &mesh).unwrap();
        (k, m)
    }

    #[test]
    fn unit_square_neumann() {
        let (k, m) = square(0.02, BoundarySpec::AllNeumann);
        let s = smallest_eigs(&k, &m, 6, DEFAULT_TOL, BcMode::Neumann).unwrap();
        let exact = [0.0, PI * PI, PI * PI, 2.0 * PI * PI, 4.0 * PI * PI, 4.0 * PI * PI];
        assert!(s.eigenvalues[0].abs() < 1e-8);
        for (l, e) in s.eigenvalues.iter().zip(exact).skip(1) {
            assert!(((l - e) / e).abs() < 0.01, "{:?}", s.eigenvalues);
        }
        assert!(s.residuals.iter().all(|&r| r <= DEFAULT_TOL));
        assert!(s.eigenvalues[0] <= 1e-8 * s.eigenvalues[1]);
        assert!((s.eigenvalues[2] - s.eigenvalues[1]).abs() <= 1e-3 * s.eigenvalues[1]);
    }

    #[test]
    fn unit_square_dirichlet_and_mixed() {
        let (k, m) = square(0.02, BoundarySpec::AllDirichlet);
        let s = smallest_eigs(&k, &m, 1, DEFAULT_TOL, BcMode::Dirichlet).unwrap();
        assert!(((s.eigenvalues[0] - 2.0 * PI * PI) / (2.0 * PI * PI)).abs() < 0.01);
        assert!(s.eigenvalues[0] > 2.0 * PI * PI);

        let spec = BoundarySpec::neumann_edges(&ConvexPolygon::unit_square(), &[3]).unwrap();
        let (k, m) = square(0.02, spec);
        let s = smallest_eigs(&k, &m, 1, DEFAULT_TOL, BcMode::Mixed).unwrap();
        let exact = 1.25 * PI * PI;
        assert!(((s.eigenvalues[0] - exact) / exact).abs() < 0.01, "{}", s.eigenvalues[0]);
    }

    #[test]
    fn sparse_matches_dense() {
        let p = ConvexPolygon::regular(5, 1.0, crate::geom::Point::default()).unwrap();
        let mesh = triangulate(&p, 0.15).unwrap();
        let (k, m) = assemble(&mesh).unwrap();
        assert!(k.n > 60);
        let dense = krylov::solve_dense(&k, &m, 8).unwrap();
        let opts = EigenOptions {
            dense_threshold: 0,
            ..EigenOptions::default()
        };
        let sparse = smallest_eigpairs(&k, &m, 8, &opts).unwrap();
        for i in 1..8 {
            assert!((dense.values[i] - sparse.values[i]).abs() <= 1e-9 * dense.values[i]);
        }
    }

    #[test]
    fn count_stability_and_orthogonality() {
        let (k, m) = square(0.04, BoundarySpec::AllNeumann);
        let opts = EigenOptions::default();
        let a = smallest_eigpairs(&k, &m, 6, &opts).unwrap();
        let b = smallest_eigpairs(&k, &m, 8, &opts).unwrap();
        for i in 1..6 {
            assert!((a.values[i] - b.values[i]).abs() <= 1e-10 * a.values[i]);
        }
        for i in 0..8 {
            let mi = m.mul(&b.vectors[i]);
            for j in 0..i {
                let ip: f64 = mi.iter().zip(&b.vectors[j]).map(|(x, y)| x * y).sum();
                assert!(ip.abs() <= 1e-8, "{i} {j} {ip}");
            }
        }
    }

    #[test]
    fn errors() {
        let (k, m) = square(0.25, BoundarySpec::AllNeumann);
        assert!(matches!(
            smallest_eigpairs(&k, &m, 0, &EigenOptions::default()),
            Err(EigenError::InvalidArgument(_))
        ));
        let neg = k.combine(-1.0, &m, 0.0);
        let opts = EigenOptions {
            dense_threshold: 0,
            ..EigenOptions::default()
        };
        assert!(matches!(
            smallest_eigpairs(&neg, &m, 2, &opts),
            Err(EigenError::FactorizationFailure(_))
        ));
    }
}

