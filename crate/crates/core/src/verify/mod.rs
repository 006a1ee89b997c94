//! Executable checks of eigenvalue and geometric inequalities.
//!
//! Every check returns a [`CheckReport`] whose rows are inequalities
//! `lhs ≤ rhs` with an explicit tolerance. Checks of proved statements are
//! marked `hard`; checks that only measure an unspecified constant record it
//! in `empirical` and pass whenever the measurement is finite.
//!
//! Neumann spectra are indexed from 0 with `λ_0 = 0`, so `λ_k` is the k-th
//! nontrivial eigenvalue; Dirichlet and mixed spectra are indexed from 1.

mod concentration;
mod fem_checks;
mod geometric;
mod report;
mod spectral;

pub use concentration::{
    boundary_concentration_check, boundary_concentration_from, concentration_lhs, dirichlet_segments,
    mixed_concentration_check, mixed_concentration_from, mixed_concentration_sweep, ConcentrationLhs, DirichletPiece,
};
pub use fem_checks::{
    certified_neumann_lower_bound, cheng_ball_check, dirichlet_monotonicity_check, dirichlet_monotonicity_from,
    dm_ratio, dm_ratio_from, keylemma_constant, keylemma_constant_box, keylemma_constant_for_net,
    replay_dm_proof, replay_dm_proof_from, smallest_sufficient_c, DmReplay,
};
pub use geometric::{bishop_gromov_check, brunn_minkowski_check};
pub use report::{write_csv_summary, write_jsonl, CheckReport, CheckRow, Provenance};
pub use spectral::{closed_manifold_check, polya_check};

use crate::analytic::AnalyticError;
use crate::fem::FemError;
use crate::geom::{ConvexPolygon, GeomError};
use crate::nets::{NetError, Partition};
use crate::spectrum::Domain;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed seed for Monte Carlo estimates.
pub const MC_SEED: u64 = 0xC0FFEE;
/// Multiplier applied to FEM refinement uncertainties in tolerances.
pub const FEM_SLACK: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("the inner domain is not contained in the outer domain")]
    NotNested,
    #[error("net has {net_size} points, more than k = {k} (R = {radius})")]
    NetTooLarge { net_size: usize, k: usize, radius: f64 },
    #[error("point ({0}, {1}) lies outside the domain")]
    PointOutside(f64, f64),
    #[error("the cells do not cover the domain")]
    NotACovering,
    #[error("spectrum has no eigenvalue with index {0}")]
    MissingEigenvalue(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Lower bound `λ_{target} ≥ min_i(1/diam C_i)² / (4M²)` from a convex
/// covering with multiplicity `M`, using `h(C) ≥ 1/diam C` for convex
/// cells. `target_index` is the cell count, in 0-based Neumann indexing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub domain: Domain,
    pub cells: Vec<ConvexPolygon>,
    pub cell_diameters: Vec<f64>,
    pub multiplicity: usize,
    pub cheeger_lower: f64,
    pub certified_lambda_lower: f64,
    pub target_index: usize,
}

impl BoundCertificate {
    pub fn new(domain: &ConvexPolygon, cells: Vec<ConvexPolygon>, multiplicity: usize) -> Self {
        let cell_diameters: Vec<f64> = cells.iter().map(ConvexPolygon::diameter).collect();
        let multiplicity = multiplicity.max(1);
        let (cheeger_lower, certified_lambda_lower) = Self::bound(&cell_diameters, multiplicity);
        BoundCertificate {
            domain: Domain::Polygon {
                vertices: domain.vertices().to_vec(),
            },
            target_index: cells.len(),
            cells,
            cell_diameters,
            multiplicity,
            cheeger_lower,
            certified_lambda_lower,
        }
    }

    pub fn from_partition(domain: &ConvexPolygon, p: &Partition) -> Self {
        Self::new(domain, p.cells.clone(), p.multiplicity)
    }

    fn bound(diameters: &[f64], m: usize) -> (f64, f64) {
        let cheeger = diameters.iter().map(|d| 1.0 / d).fold(f64::INFINITY, f64::min);
        (cheeger, cheeger * cheeger / (4.0 * (m * m) as f64))
    }

    /// Recomputes the bound from the stored cells.
    pub fn recompute(&self) -> f64 {
        let d: Vec<f64> = self.cells.iter().map(ConvexPolygon::diameter).collect();
        Self::bound(&d, self.multiplicity).1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexPolygon;

    #[test]
    fn quadrant_certificate() {
        let sq = ConvexPolygon::unit_square();
        let cells = (0..4)
            .map(|i| {
                let (x, y) = ((i % 2) as f64 * 0.5, (i / 2) as f64 * 0.5);
                ConvexPolygon::rectangle(x, y, x + 0.5, y + 0.5).unwrap()
            })
            .collect();
        let c = BoundCertificate::new(&sq, cells, 1);
        assert_eq!(c.target_index, 4);
        assert!((c.certified_lambda_lower - 0.5).abs() < 1e-12);
        assert_eq!(c.recompute(), c.certified_lambda_lower);
        let one = BoundCertificate::new(&sq, vec![sq.clone()], 1);
        assert!((one.certified_lambda_lower - 0.125).abs() < 1e-12);
    }
}
