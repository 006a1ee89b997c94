//! Spectral geometry of convex domains: nets and Voronoi certificates,
//! P1 finite element eigenvalues, analytic spectra, and executable checks
//! of the inequalities relating them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod analytic;
pub mod corpus;
pub mod discretize;
pub mod eigsolve;
pub mod experiment;
pub mod fem;
pub mod geom;
pub mod nets;
pub mod spectrum;
pub mod verify;
