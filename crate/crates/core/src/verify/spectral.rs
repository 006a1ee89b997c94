//! Upper bounds against Weyl-type reference curves.

use super::{CheckReport, CheckRow, Provenance, VerifyError, FEM_SLACK};
use crate::analytic::{reference_bounds, torus_spectrum};
use crate::spectrum::{BcMode, Spectrum};
use serde_json::json;

fn nontrivial(spec: &Spectrum, kmax: usize) -> Result<Vec<(usize, f64, f64)>, VerifyError> {
    let first = spec.index_base.max(1);
    (first..=kmax)
        .map(|k| {
            spec.lambda(k)
                .map(|l| (k, l, spec.uncertainty_of(k)))
                .ok_or(VerifyError::MissingEigenvalue(k))
        })
        .collect()
}

/// Compares `λ_k` for `k = 1..=kmax` against the Pólya and Kröger curves.
///
/// Returns `[polya, kroger]`. Kröger's bound is a hard check for Neumann
/// spectra of domains and the Pólya bound only where it is known to hold
/// (boxes and disks). Otherwise the largest ratio to the bound is recorded
/// as an empirical constant; flat tori, for instance, exceed both.
pub fn polya_check(spec: &Spectrum, n: usize, vol: f64, kmax: usize) -> Result<[CheckReport; 2], VerifyError> {
    if n == 0 || !(vol > 0.0) || kmax == 0 {
        return Err(VerifyError::InvalidArgument(format!("n = {n}, vol = {vol}, kmax = {kmax}")));
    }
    let values = nontrivial(spec, kmax)?;
    let polya_hard = matches!(spec.bc_mode, BcMode::BoxNeumann | BcMode::DiskNeumann);
    let kroger_hard = polya_hard || spec.bc_mode == BcMode::Neumann;
    let (mut polya, mut kroger) = (Vec::new(), Vec::new());
    let (mut worst_polya, mut worst_kroger, mut worst_u) = (0.0f64, 0.0f64, 0.0f64);
    for &(k, lambda, u) in &values {
        let b = reference_bounds(n, k, vol);
        let ratio = lambda / b.polya;
        worst_polya = worst_polya.max(ratio);
        worst_u = worst_u.max(u);
        let tol = FEM_SLACK * u * lambda + 1e-12 * lambda;
        polya.push(if polya_hard {
            CheckRow::le(lambda, b.polya, tol).with_k(k).with_value(ratio)
        } else {
            CheckRow::measured(ratio).with_k(k)
        });
        worst_kroger = worst_kroger.max(lambda / b.kroger);
        kroger.push(if kroger_hard {
            CheckRow::le(lambda, b.kroger, tol).with_k(k).with_value(lambda / b.kroger)
        } else {
            CheckRow::measured(lambda / b.kroger).with_k(k)
        });
    }
    let inputs = json!({"domain": spec.domain, "bc_mode": spec.bc_mode, "n": n, "vol": vol, "kmax": kmax});
    let prov = Provenance {
        h: spec.h,
        fem_uncertainty: spec.h.map(|_| worst_u),
        enumerated: spec.h.is_none().then_some(spec.len()),
        ..Provenance::default()
    };
    let base = spec.index_base;
    Ok([
        CheckReport::from_rows("polya", inputs.clone(), polya, polya_hard)
            .with_empirical(worst_polya)
            .with_index_base(base)
            .with_provenance(prov.clone()),
        CheckReport::from_rows("kroger", inputs, kroger, kroger_hard)
            .with_empirical(worst_kroger)
            .with_index_base(base)
            .with_provenance(prov),
    ])
}

/// Flat torus with the given side lengths: `λ_k ≤ n(n+4)ω_n^{4/n}((k+1)/(ω_n vol))^{2/n}`
/// for `k = 1..=kmax`, recording `max_k λ_k / (k/(ω_n vol))^{2/n}`.
pub fn closed_manifold_check(lengths: &[f64], kmax: usize) -> Result<CheckReport, VerifyError> {
    let n = lengths.len();
    if !(1..=8).contains(&n) || kmax == 0 {
        return Err(VerifyError::InvalidArgument(format!("dimension {n}, kmax {kmax}")));
    }
    let spec = torus_spectrum(lengths, kmax + 1)?;
    let vol: f64 = lengths.iter().product();
    let mut rows = Vec::with_capacity(kmax);
    let mut constant = 0.0f64;
    for (k, lambda, _) in nontrivial(&spec, kmax)? {
        let b = reference_bounds(n, k, vol);
        let weyl = b.polya / (4.0 * std::f64::consts::PI.powi(2));
        constant = constant.max(lambda / weyl);
        rows.push(CheckRow::le(lambda, b.liyau, 1e-12 * b.liyau).with_k(k).with_value(lambda / weyl));
    }
    Ok(CheckReport::from_rows("closed_manifold", json!({"lengths": lengths, "kmax": kmax}), rows, true)
        .with_empirical(constant)
        .with_index_base(0)
        .with_provenance(Provenance {
            enumerated: Some(spec.len()),
            ..Provenance::default()
        }))
}
