use convex_spectra::analytic::{box_spectrum, BoxBc};
use convex_spectra::corpus::{generate_nested_pair, point_in_polygon, random_polygon, rng, DEFAULT_VERTEX_RANGE};
use convex_spectra::geom::{BoxDomain, ConvexPolygon, Point};
use convex_spectra::verify::{
    bishop_gromov_check, boundary_concentration_check, brunn_minkowski_check, closed_manifold_check, dm_ratio,
    keylemma_constant_box, polya_check, replay_dm_proof, CheckReport,
};
use rand::Rng;
use serde_json::Value;

fn round_trip(r: &CheckReport) -> CheckReport {
    serde_json::from_str(&serde_json::to_string(r).unwrap()).unwrap()
}

fn field<T: serde::de::DeserializeOwned>(inputs: &Value, key: &str) -> T {
    serde_json::from_value(inputs[key].clone()).unwrap()
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn geometric_reports_recompute_from_their_inputs() {
    let mut g = rng(17);
    for _ in 0..20 {
        let p = random_polygon(&mut g, DEFAULT_VERTEX_RANGE).unwrap();
        let x = point_in_polygon(&mut g, &p);
        let big = g.random_range(0.1..1.0);
        let original = bishop_gromov_check(&p, x, 0.4 * big, big).unwrap();
        let stored = round_trip(&original);
        let again = bishop_gromov_check(
            &field::<ConvexPolygon>(&stored.inputs, "polygon"),
            field::<Point>(&stored.inputs, "x"),
            field(&stored.inputs, "r"),
            field(&stored.inputs, "R"),
        )
        .unwrap();
        assert!(same(again.lhs, stored.lhs) && same(again.rhs, stored.rhs));

        let q = random_polygon(&mut g, DEFAULT_VERTEX_RANGE).unwrap();
        let stored = round_trip(&brunn_minkowski_check(&p, &q, 0.3).unwrap());
        let again = brunn_minkowski_check(
            &field::<ConvexPolygon>(&stored.inputs, "A"),
            &field::<ConvexPolygon>(&stored.inputs, "B"),
            field(&stored.inputs, "t"),
        )
        .unwrap();
        assert!(same(again.lhs, stored.lhs) && same(again.rhs, stored.rhs));
    }
    let stored = round_trip(&closed_manifold_check(&[1.0, 2.5, 0.7], 200).unwrap());
    let again = closed_manifold_check(&field::<Vec<f64>>(&stored.inputs, "lengths"), field(&stored.inputs, "kmax")).unwrap();
    assert_eq!(again.empirical, stored.empirical);
}

#[test]
fn fem_reports_are_reproducible() {
    let p = random_polygon(&mut rng(4), DEFAULT_VERTEX_RANGE).unwrap();
    let a = boundary_concentration_check(&p, 0.1, 0.08).unwrap();
    let b = boundary_concentration_check(&p, 0.1, 0.08).unwrap();
    assert_eq!(a, b);
    assert_eq!(round_trip(&a), a);
}

#[test]
fn analytic_ratios_are_scale_invariant() {
    for lengths in [vec![1.0, 1.0], vec![1.0, 1.7, 0.6], vec![0.8, 1.1, 1.3, 1.0]] {
        let n = lengths.len();
        let small = BoxDomain::new(lengths.clone()).unwrap();
        let large = small.scaled(3.0);
        let a = box_spectrum(&small, BoxBc::Neumann, 501).unwrap();
        let b = box_spectrum(&large, BoxBc::Neumann, 501).unwrap();
        let [pa, _] = polya_check(&a, n, small.volume(), 500).unwrap();
        let [pb, _] = polya_check(&b, n, large.volume(), 500).unwrap();
        let (ra, rb) = (pa.empirical.unwrap(), pb.empirical.unwrap());
        assert!((ra - rb).abs() <= 1e-9 * ra);

        let ka = keylemma_constant_box(&small, 0.5, 0.05).unwrap();
        let kb = keylemma_constant_box(&large, 1.5, 0.15).unwrap();
        assert_eq!(ka.rows[0].k, kb.rows[0].k);
        assert!((ka.empirical.unwrap() - kb.empirical.unwrap()).abs() <= 1e-9 * ka.empirical.unwrap());
    }
}

#[test]
fn neumann_ratios_are_scale_invariant() {
    let (inner, outer) = generate_nested_pair(3).unwrap();
    let a = dm_ratio(&inner, &outer, 4, 0.08).unwrap();
    let b = dm_ratio(&inner.scaled(2.0), &outer.scaled(2.0), 4, 0.16).unwrap();
    let u = a.provenance.fem_uncertainty.unwrap().max(b.provenance.fem_uncertainty.unwrap());
    for (x, y) in a.rows.iter().zip(&b.rows) {
        let (x, y) = (x.value.unwrap(), y.value.unwrap());
        assert!((x - y).abs() <= 3.0 * u * x + 1e-9, "{x} vs {y}");
    }
}

#[test]
fn replayed_certificates_satisfy_the_identity() {
    for seed in 0..4 {
        let (inner, outer) = generate_nested_pair(seed).unwrap();
        let r = replay_dm_proof(&inner, &outer, 3, 4.0, 0.08).unwrap();
        let identity = r.report.rows.iter().find(|row| row.label.as_deref() == Some("identity")).unwrap();
        assert!(identity.pass);
        assert_eq!(r.certificate.recompute(), r.certificate.certified_lambda_lower);
        assert!(r.report.pass, "{:?}", r.report);
    }
}
