//! Weyl-type reference bounds and unit-ball volumes.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// `ln Γ(n/2 + 1)` by the half-integer recurrence from `Γ(1) = 1` and
/// `Γ(1/2) = √π`.
pub fn ln_gamma_half_integer(n: usize) -> f64 {
    // Γ(n/2 + 1) = Π_{j} (n/2 - j) down to 1 or 1/2.
    let mut acc = if n.is_multiple_of(2) { 0.0 } else { 0.5 * PI.ln() };
    let mut t = n as f64 / 2.0;
    while t > 0.25 {
        acc += t.ln();
        t -= 1.0;
    }
    acc
}

/// `Γ(n/2 + 1)` by the same recurrence; overflows to infinity for large `n`.
pub fn gamma_half_integer(n: usize) -> f64 {
    let mut acc = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut t = n as f64 / 2.0;
    while t > 0.25 {
        acc *= t;
        t -= 1.0;
    }
    acc
}

pub fn ln_omega_n(n: usize) -> f64 {
    0.5 * n as f64 * PI.ln() - ln_gamma_half_integer(n)
}

/// Volume of the Euclidean unit ball in `ℝⁿ`.
pub fn omega_n(n: usize) -> f64 {
    ln_omega_n(n).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    pub n: usize,
    pub k: usize,
    pub vol: f64,
    pub omega_n: f64,
    pub polya: f64,
    pub kroger: f64,
    pub liyau: f64,
}

impl ReferenceBounds {
    /// Buser's closed-manifold bound for Ricci curvature `≥ -(n-1)a²`,
    /// with the dimensional constant supplied by the caller.
    pub fn buser(&self, a: f64, c_n: f64) -> f64 {
        let n = self.n as f64;
        (n - 1.0).powi(2) / 4.0 * a * a + c_n * (self.k as f64 / self.vol).powf(2.0 / n)
    }
}

/// Pólya, Kröger and Li–Yau bounds, evaluated in log space.
pub fn reference_bounds(n: usize, k: usize, vol: f64) -> ReferenceBounds {
    let nf = n as f64;
    let lw = ln_omega_n(n);
    let weyl = |kk: f64| (2.0 / nf) * (kk.ln() - lw - vol.ln());
    let ln_4pi2 = (4.0 * PI * PI).ln();
    ReferenceBounds {
        n,
        k,
        vol,
        omega_n: lw.exp(),
        polya: (ln_4pi2 + weyl(k as f64)).exp(),
        kroger: (ln_4pi2 + (2.0 / nf) * ((nf + 2.0) / nf).ln() + weyl(k as f64)).exp(),
        liyau: ((nf * (nf + 4.0)).ln() + (4.0 / nf) * lw + weyl(k as f64 + 1.0)).exp(),
    }
}

/// Radius `r` with `vol(r · B_pⁿ) = 1`, from
/// `vol(B_pⁿ) = (2Γ(1/p + 1))ⁿ / Γ(n/p + 1)`.
pub fn lp_unit_volume_radius(n: usize, p: f64) -> f64 {
    let nf = n as f64;
    let ln_vol = nf * (2.0f64.ln() + ln_gamma(1.0 / p + 1.0)) - ln_gamma(nf / p + 1.0);
    (-ln_vol / nf).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_and_ball_volumes() {
        assert!((gamma_half_integer(2) - 1.0).abs() < 1e-15);
        assert!((gamma_half_integer(3) - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert!((omega_n(2) - PI).abs() < 1e-14);
        assert!((omega_n(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ln_gamma_half_integer(100) - ln_gamma(51.0)).abs() < 1e-10);
        assert!((ln_gamma_half_integer(401) - ln_gamma(201.5)).abs() < 1e-9);
        let ratio = (ln_gamma_half_integer(100) * 2.0 / 100.0).exp() / 100.0;
        assert!((0.1..=1.0).contains(&ratio));
        assert!(omega_n(400) > 0.0 && omega_n(400) < 1e-100);
    }

    #[test]
    fn planar_bounds() {
        let b = reference_bounds(2, 1, 1.0);
        assert!((b.polya - 4.0 * PI).abs() < 1e-12);
        assert!((b.kroger - 8.0 * PI).abs() < 1e-12);
        assert!((b.liyau - 24.0 * PI).abs() < 1e-11);
        assert!((b.buser(0.0, 3.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn lp_radius() {
        assert!((lp_unit_volume_radius(2, 1.0) - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((lp_unit_volume_radius(2, 2.0) - 1.0 / PI.sqrt()).abs() < 1e-14);
        // (10!)^{1/10}/2 for the cross-polytope.
        let r = lp_unit_volume_radius(10, 1.0);
        let fact10: f64 = (1..=10).map(|i| i as f64).product();
        assert!((r - fact10.powf(0.1) / 2.0).abs() < 1e-12);
    }
}
