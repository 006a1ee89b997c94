//! Bessel functions of the first kind and their positive zeros.
//!
//! `J_ν(x)` is evaluated by Miller's backward recurrence from far above
//! `max(ν, x)`, normalized with the Neumann series
//! `(x/2)^μ = Σ_k (μ + 2k) Γ(μ + k)/k! J_{μ+2k}(x)`, `μ = ν - ⌊ν⌋`.

use super::AnalyticError;
use crate::spectrum::{BcMode, Domain, Spectrum};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselKind {
    /// Zeros of `J_ν`.
    J,
    /// Zeros of `J_ν'`.
    JPrime,
}

/// `(J_ν(x), J_{ν+1}(x))` for `x > 0`.
fn miller(nu: f64, x: f64) -> (f64, f64) {
    const BIG: f64 = 1e250;
    let n0 = nu.floor() as usize;
    let mu = nu - n0 as f64;
    let reach = (n0 as f64).max(x);
    let mut top = (reach + 30.0 + 10.0 * reach.sqrt()).ceil() as usize;
    if top % 2 == 1 {
        top += 1;
    }
    // Normalization weights c_k for offsets 2k.
    let half = top / 2;
    let mut c = Vec::with_capacity(half + 1);
    c.push(gamma(mu + 1.0));
    let mut g = gamma(mu + 1.0); // Γ(μ + k)/k! at k = 1
    for k in 1..=half {
        if k > 1 {
            g *= (mu + k as f64 - 1.0) / k as f64;
        }
        c.push((mu + 2.0 * k as f64) * g);
    }

    let mut jp1 = 0.0;
    let mut j = 1e-30;
    let mut sum = 0.0;
    let mut at_nu = (0.0, 0.0);
    let mut captured = false;
    let mut i = top;
    loop {
        if i.is_multiple_of(2) {
            sum += c[i / 2] * j;
        }
        if i == n0 {
            at_nu = (j, jp1);
            captured = true;
        }
        if i == 0 {
            break;
        }
        let jm1 = 2.0 * (mu + i as f64) / x * j - jp1;
        jp1 = j;
        j = jm1;
        i -= 1;
        if j.abs() > BIG {
            j /= BIG;
            jp1 /= BIG;
            sum /= BIG;
            if captured {
                at_nu.0 /= BIG;
                at_nu.1 /= BIG;
            }
        }
    }
    let scale = (0.5 * x).powf(mu) / sum;
    (at_nu.0 * scale, at_nu.1 * scale)
}

/// `J_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    miller(nu, x).0
}

/// `J_ν'(x) = (ν/x) J_ν(x) - J_{ν+1}(x)`.
pub fn bessel_j_prime(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 1.0 {
            0.5
        } else if nu > 0.0 && nu < 1.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    let (j, j1) = miller(nu, x);
    nu / x * j - j1
}

fn eval(nu: f64, kind: BesselKind, x: f64) -> f64 {
    match kind {
        BesselKind::J => bessel_j(nu, x),
        BesselKind::JPrime => bessel_j_prime(nu, x),
    }
}

fn bisect(nu: f64, kind: BesselKind, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        let fm = eval(nu, kind, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The first `count` positive zeros of `J_ν` or `J_ν'`. For `J_0'` the
/// trivial zero at the origin is skipped.
pub fn bessel_zeros(nu: f64, kind: BesselKind, count: usize) -> Result<Vec<f64>, AnalyticError> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(AnalyticError::InvalidArgument(format!("order {nu} must be >= 0")));
    }
    let step = 0.25 * nu.cbrt().max(1.0);
    let mut zeros = Vec::with_capacity(count);
    let mut x = nu.max(1e-6);
    let mut fx = eval(nu, kind, x);
    let mut limit = nu + 10.0 * nu.cbrt() + 20.0;
    while zeros.len() < count {
        let x1 = x + step;
        if x1 > limit {
            return Err(AnalyticError::NoBracket { nu });
        }
        let f1 = eval(nu, kind, x1);
        if f1 == 0.0 {
            zeros.push(x1);
        } else if (f1 > 0.0) != (fx > 0.0) {
            zeros.push(bisect(nu, kind, x, x1, fx));
        } else {
            x = x1;
            fx = f1;
            continue;
        }
        limit = zeros.last().unwrap() + 20.0;
        x = x1;
        fx = f1;
    }
    Ok(zeros)
}

pub fn bessel_first_zero(nu: f64, kind: BesselKind) -> Result<f64, AnalyticError> {
    Ok(bessel_zeros(nu, kind, 1)?[0])
}

/// The `count` smallest eigenvalues of the disk of radius `r`. Modes with
/// angular order `m ≥ 1` are counted twice.
pub fn disk_spectrum(r: f64, bc: super::BoxBc, count: usize) -> Result<Spectrum, AnalyticError> {
    if !(r > 0.0) || count == 0 {
        return Err(AnalyticError::InvalidArgument(format!("radius {r}, count {count}")));
    }
    let (kind, mode) = match bc {
        super::BoxBc::Neumann => (BesselKind::JPrime, BcMode::DiskNeumann),
        super::BoxBc::Dirichlet => (BesselKind::J, BcMode::DiskDirichlet),
    };
    // Every zero below `bound` for every order; j_{m,1} > m bounds the orders.
    let mut bound = 2.0 * (count as f64).sqrt() + 10.0;
    loop {
        let mut values: Vec<f64> = Vec::new();
        if kind == BesselKind::JPrime {
            values.push(0.0);
        }
        let mut m = 0usize;
        while (m as f64) < bound {
            let mult = if m == 0 { 1 } else { 2 };
            let mut k = 1;
            loop {
                let zs = bessel_zeros(m as f64, kind, k)?;
                let z = *zs.last().unwrap();
                if z >= bound {
                    break;
                }
                for _ in 0..mult {
                    values.push(z);
                }
                k += 1;
            }
            m += 1;
        }
        if values.len() >= count {
            values.sort_by(f64::total_cmp);
            values.truncate(count);
            let values = values.iter().map(|z| (z / r).powi(2)).collect();
            return Ok(Spectrum::new(Domain::Disk { radius: r }, mode, values));
        }
        bound *= 1.5;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Power series, fine for moderate x and small orders.
    fn series(nu: f64, x: f64) -> f64 {
        let mut term = (0.5 * x).powf(nu) / gamma(nu + 1.0);
        let mut s = term;
        for k in 1..200 {
            term *= -(0.25 * x * x) / (k as f64 * (nu + k as f64));
            s += term;
        }
        s
    }

    #[test]
    fn values_match_series() {
        for nu in [0.0, 0.5, 1.0, 2.5, 7.0] {
            for x in [0.1, 1.0, 3.7, 9.0] {
                let a = bessel_j(nu, x);
                let b = series(nu, x);
                assert!((a - b).abs() < 1e-13, "nu {nu} x {x}: {a} vs {b}");
            }
        }
        let x = 2.3;
        assert!((bessel_j(0.5, x) - (2.0 / (PI * x)).sqrt() * x.sin()).abs() < 1e-14);
        assert!((bessel_j_prime(0.0, x) + bessel_j(1.0, x)).abs() < 1e-14);
    }

    /// Bessel's integral for integer order by the trapezoid rule.
    fn integral(n: u32, x: f64) -> f64 {
        let steps = 4000;
        let h = PI / steps as f64;
        let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
        let inner: f64 = (1..steps).map(|i| f(i as f64 * h)).sum();
        (inner + 0.5 * (f(0.0) + f(PI))) * h / PI
    }

    #[test]
    fn large_orders_match_integral() {
        for (n, x) in [(100, 100.0), (100, 120.0), (40, 35.0), (150, 170.0)] {
            let a = bessel_j(n as f64, x);
            let b = integral(n, x);
            assert!((a - b).abs() < 1e-12, "n {n} x {x}: {a} vs {b}");
        }
    }

    #[test]
    fn first_zeros() {
        let z = bessel_first_zero(0.0, BesselKind::J).unwrap();
        assert!((z - 2.404_825_557_7).abs() < 1e-9);
        let z = bessel_first_zero(0.5, BesselKind::J).unwrap();
        assert!((z - PI).abs() <= 1e-10 * PI);
        let z = bessel_first_zero(1.0, BesselKind::JPrime).unwrap();
        assert!((z - 1.841_183_781_3).abs() < 1e-9);
        let z = bessel_first_zero(0.0, BesselKind::JPrime).unwrap();
        assert!((z - 3.831_705_970_2).abs() < 1e-9);
    }

    #[test]
    fn disk_examples() {
        let s = disk_spectrum(1.0, crate::analytic::BoxBc::Dirichlet, 3).unwrap();
        assert!((s.lambda(1).unwrap() - 5.7832).abs() < 1e-4);
        let n = disk_spectrum(1.0, crate::analytic::BoxBc::Neumann, 3).unwrap();
        assert_eq!(n.lambda(0), Some(0.0));
        assert!((n.lambda(1).unwrap() - 3.3900).abs() < 1e-4);
        assert_eq!(n.lambda(1), n.lambda(2));
        let s2 = disk_spectrum(2.0, crate::analytic::BoxBc::Dirichlet, 1).unwrap();
        assert!((s2.eigenvalues[0] - s.eigenvalues[0] / 4.0).abs() < 1e-12);
    }
}
