use convex_spectra::analytic::{
    bessel_first_zero, box_counting, box_spectrum, lp_unit_volume_radius, torus_spectrum, BesselKind, BoxBc,
};
use convex_spectra::corpus::rng;
use convex_spectra::geom::BoxDomain;
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

/// All lattice values up to `cap` by scanning the bounding cube.
fn brute_force(lengths: &[f64], bc: Option<BoxBc>, cap: f64) -> Vec<f64> {
    let scale = if bc.is_some() { PI * PI } else { 4.0 * PI * PI };
    let ranges: Vec<(i64, i64)> = lengths
        .iter()
        .map(|l| {
            let m = (l * (cap / scale).sqrt()).ceil() as i64;
            match bc {
                Some(BoxBc::Neumann) => (0, m),
                Some(BoxBc::Dirichlet) => (1, m),
                None => (-m, m),
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'outer: loop {
        let v: f64 = scale * idx.iter().zip(lengths).map(|(&m, l)| (m as f64 / l).powi(2)).sum::<f64>();
        if v <= cap {
            out.push(v);
        }
        for d in 0..idx.len() {
            idx[d] += 1;
            if idx[d] <= ranges[d].1 {
                continue 'outer;
            }
            idx[d] = ranges[d].0;
        }
        break;
    }
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn enumerator_equals_brute_force() {
    let mut g = rng(2024);
    for i in 0..20 {
        let n = g.random_range(1..=4);
        let lengths: Vec<f64> = (0..n).map(|_| g.random_range(0.5..2.0)).collect();
        let bc = [Some(BoxBc::Neumann), Some(BoxBc::Dirichlet), None][i % 3];
        let count = g.random_range(100..=10_000);
        let fast = match bc {
            Some(bc) => box_spectrum(&BoxDomain::new(lengths.clone()).unwrap(), bc, count),
            None => torus_spectrum(&lengths, count),
        }
        .unwrap()
        .eigenvalues;
        // Compare the full multiset below the largest value, so ties at the
        // cutoff cannot hide a missing mode.
        let cap = fast[count - 1];
        let slow = brute_force(&lengths, bc, cap * (1.0 + 1e-12));
        let below: Vec<f64> = fast.iter().copied().filter(|&v| v < cap * (1.0 - 1e-12)).collect();
        let slow_below: Vec<f64> = slow.iter().copied().filter(|&v| v < cap * (1.0 - 1e-12)).collect();
        assert_eq!(below.len(), slow_below.len(), "instance {i}: {lengths:?} {bc:?}");
        for (a, b) in below.iter().zip(&slow_below) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "instance {i}: {a} vs {b}");
        }
        assert!(slow.len() >= count);
    }
}

proptest! {
    #[test]
    fn box_spectrum_scales_as_inverse_square(
        lengths in prop::collection::vec(0.3..3.0f64, 1..5),
        c in 0.1..10.0f64,
        dirichlet in any::<bool>(),
    ) {
        let bc = if dirichlet { BoxBc::Dirichlet } else { BoxBc::Neumann };
        let a = box_spectrum(&BoxDomain::new(lengths.clone()).unwrap(), bc, 50).unwrap();
        let scaled: Vec<f64> = lengths.iter().map(|l| l * c).collect();
        let b = box_spectrum(&BoxDomain::new(scaled).unwrap(), bc, 50).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x / (c * c) - y).abs() <= 1e-12 * y.max(1e-300));
        }
    }
}

#[test]
fn first_bessel_zero_grows_like_its_order() {
    let mut prev = f64::INFINITY;
    for nu in (10..=100).step_by(5) {
        let nu = nu as f64;
        let ratio = bessel_first_zero(nu, BesselKind::J).unwrap() / nu;
        assert!((1.0..=1.9).contains(&ratio), "ν = {nu}: {ratio}");
        assert!(ratio < prev);
        prev = ratio;
    }
}

#[test]
fn counting_function_follows_weyl() {
    let square = BoxDomain::cube(2, 1.0).unwrap();
    let lambda = 1e4;
    let n = box_counting(&square, BoxBc::Neumann, lambda) as f64;
    let ratio = n * 4.0 * PI / lambda;
    assert!((ratio - 1.0).abs() <= 0.05, "{ratio}");
}

#[test]
fn lp_radius_gives_unit_volume() {
    // Monte Carlo volume of r·B_p⁴ inside the cube [-r, r]⁴.
    let mut g = rng(99);
    for p in [1.0, 1.5, 2.0, 3.0] {
        let r = lp_unit_volume_radius(4, p);
        let samples = 400_000;
        let hits = (0..samples)
            .filter(|_| {
                let s: f64 = (0..4).map(|_| g.random_range(-1.0f64..1.0).abs().powf(p)).sum();
                s <= 1.0
            })
            .count();
        let f = hits as f64 / samples as f64;
        let cube = (2.0 * r).powi(4);
        let se = cube * (f * (1.0 - f) / samples as f64).sqrt();
        assert!((f * cube - 1.0).abs() <= 4.0 * se, "p = {p}: {} ± {se}", f * cube);
    }
}
