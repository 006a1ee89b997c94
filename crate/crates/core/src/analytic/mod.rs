//! Closed-form spectra, Bessel zeros and reference eigenvalue bounds.

mod bessel;
mod bounds;
mod lattice;

pub use bessel::{bessel_j, bessel_j_prime, bessel_first_zero, bessel_zeros, disk_spectrum, BesselKind};
pub use bounds::{
    gamma_half_integer, ln_gamma_half_integer, ln_omega_n, lp_unit_volume_radius, omega_n, reference_bounds,
    ReferenceBounds,
};
pub use lattice::{box_counting, box_spectrum, torus_spectrum, BoxBc};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("no sign change found for the Bessel zero search with nu = {nu}")]
    NoBracket { nu: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
