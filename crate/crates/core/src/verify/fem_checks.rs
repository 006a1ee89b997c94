//! Checks built on finite element spectra of nested polygons.

use super::{BoundCertificate, CheckReport, CheckRow, Provenance, VerifyError, FEM_SLACK};
use crate::analytic::{bessel_first_zero, box_spectrum, BesselKind, BoxBc};
use crate::discretize::BoundarySpec;
use crate::fem::{polygon_spectrum, FemOptions};
use crate::geom::{BoxDomain, ConvexPolygon, Point};
use crate::nets::{intersect, maximal_separated_net, voronoi_cells, NetDomain, Partition, PointSet};
use crate::spectrum::Spectrum;
use serde::{Deserialize, Serialize};
use serde_json::json;

fn lambda(spec: &Spectrum, k: usize) -> Result<(f64, f64), VerifyError> {
    spec.lambda(k)
        .map(|l| (l, spec.uncertainty_of(k)))
        .ok_or(VerifyError::MissingEigenvalue(k))
}

fn fem_provenance(h: Option<f64>, u: f64) -> Provenance {
    Provenance {
        h,
        fem_uncertainty: Some(u),
        ..Provenance::default()
    }
}

fn nested(outer: &ConvexPolygon, inner: &ConvexPolygon) -> Result<(), VerifyError> {
    if outer.contains_polygon(inner) {
        Ok(())
    } else {
        Err(VerifyError::NotNested)
    }
}

/// `λ_k^D(Ω') ≤ λ_k^D(Ω)` for `k = 1..=kmax`, from precomputed Dirichlet
/// spectra of `Ω ⊆ Ω'`.
pub fn dirichlet_monotonicity_from(inner: &Spectrum, outer: &Spectrum, kmax: usize) -> Result<CheckReport, VerifyError> {
    let mut rows = Vec::with_capacity(kmax);
    let mut worst_u = 0.0f64;
    for k in 1..=kmax {
        let (li, ui) = lambda(inner, k)?;
        let (lo, uo) = lambda(outer, k)?;
        worst_u = worst_u.max(ui).max(uo);
        let tol = FEM_SLACK * (ui + uo) * li + 1e-10 * li;
        rows.push(CheckRow::le(lo, li, tol).with_k(k).with_value(li / lo));
    }
    let inputs = json!({"inner": inner.domain, "outer": outer.domain, "kmax": kmax, "h": inner.h});
    Ok(CheckReport::from_rows("dirichlet_monotonicity", inputs, rows, true)
        .with_index_base(1)
        .with_provenance(fem_provenance(inner.h, worst_u)))
}

/// Dirichlet monotonicity for `Ω ⊆ Ω'` with FEM spectra at mesh size `h`.
pub fn dirichlet_monotonicity_check(
    omega: &ConvexPolygon,
    omega_prime: &ConvexPolygon,
    kmax: usize,
    h: f64,
) -> Result<CheckReport, VerifyError> {
    nested(omega_prime, omega)?;
    let opts = FemOptions::new(h);
    let inner = polygon_spectrum(omega, &BoundarySpec::AllDirichlet, kmax, &opts)?;
    let outer = polygon_spectrum(omega_prime, &BoundarySpec::AllDirichlet, kmax, &opts)?;
    dirichlet_monotonicity_from(&inner, &outer, kmax)
}

/// Ratios `λ_k^N(Ω')/λ_k^N(Ω)` for `k = 1..=kmax`; the largest is recorded
/// as the empirical constant.
pub fn dm_ratio_from(inner: &Spectrum, outer: &Spectrum, kmax: usize) -> Result<CheckReport, VerifyError> {
    let mut rows = Vec::with_capacity(kmax);
    let (mut worst, mut worst_u) = (0.0f64, 0.0f64);
    for k in 1..=kmax {
        let (li, ui) = lambda(inner, k)?;
        let (lo, uo) = lambda(outer, k)?;
        let ratio = lo / li;
        worst = worst.max(ratio);
        worst_u = worst_u.max(ui).max(uo);
        rows.push(CheckRow::measured(ratio).with_k(k));
    }
    let inputs = json!({"inner": inner.domain, "outer": outer.domain, "kmax": kmax, "h": inner.h});
    Ok(CheckReport::from_rows("dm_ratio", inputs, rows, false)
        .with_empirical(worst)
        .with_index_base(0)
        .with_provenance(fem_provenance(inner.h, worst_u)))
}

pub fn dm_ratio(omega: &ConvexPolygon, omega_prime: &ConvexPolygon, kmax: usize, h: f64) -> Result<CheckReport, VerifyError> {
    nested(omega_prime, omega)?;
    let opts = FemOptions::new(h);
    let inner = polygon_spectrum(omega, &BoundarySpec::AllNeumann, kmax + 1, &opts)?;
    let outer = polygon_spectrum(omega_prime, &BoundarySpec::AllNeumann, kmax + 1, &opts)?;
    dm_ratio_from(&inner, &outer, kmax)
}

/// Outcome of replaying the lower-bound argument for `λ_k^N(Ω)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmReplay {
    pub certificate: BoundCertificate,
    pub report: CheckReport,
    pub radius: f64,
    pub net: PointSet,
}

/// Replays the lower bound `λ_k^N(Ω) ≥ λ_k^N(Ω')/(8cn)²` (with `n = 2`):
/// an `R`-net of `Ω'` with `R = cn/√λ_k^N(Ω')`, its Voronoi cells clipped
/// to `Ω`, and the resulting certificate compared with both the identity
/// and the FEM spectrum of `Ω`.
pub fn replay_dm_proof_from(
    omega: &ConvexPolygon,
    omega_prime: &ConvexPolygon,
    k: usize,
    c: f64,
    inner: &Spectrum,
    outer: &Spectrum,
) -> Result<DmReplay, VerifyError> {
    nested(omega_prime, omega)?;
    if k == 0 || !(c > 0.0) {
        return Err(VerifyError::InvalidArgument(format!("need k ≥ 1 and c > 0, got k = {k}, c = {c}")));
    }
    let n = 2.0;
    let (lk_outer, u_outer) = lambda(outer, k)?;
    let radius = c * n / lk_outer.sqrt();
    let net = maximal_separated_net(NetDomain::Polygon(omega_prime), radius, radius / 16.0)?;
    if net.len() > k {
        return Err(VerifyError::NetTooLarge {
            net_size: net.len(),
            k,
            radius,
        });
    }
    let sites = net.planar().expect("planar net");
    let cells: Vec<ConvexPolygon> = voronoi_cells(omega_prime, &sites)?
        .iter()
        .filter_map(|cell| intersect(cell, omega))
        .collect();
    let certificate = BoundCertificate::new(omega, cells, 1);
    let target = certificate.target_index;
    let (l_target, u_target) = lambda(inner, target)?;
    let (lk_inner, u_inner) = lambda(inner, k)?;
    let certified = certificate.certified_lambda_lower;
    let max_diam = certificate.cell_diameters.iter().copied().fold(0.0, f64::max);
    let identity = lk_outer / (8.0 * c * n).powi(2);
    let rows = vec![
        CheckRow::le(net.len() as f64, k as f64, 0.0).with_label("net_size"),
        CheckRow::le(max_diam, 4.0 * radius, 1e-12 * radius).with_label("cell_diameter"),
        CheckRow::le(identity, certified, 1e-12 * certified).with_label("identity"),
        CheckRow::le(certified, l_target, FEM_SLACK * u_target * l_target)
            .with_k(target)
            .with_label("certificate"),
        CheckRow::le(certified, lk_inner, FEM_SLACK * u_inner * lk_inner)
            .with_k(k)
            .with_label("lambda_k"),
    ];
    let inputs = json!({"omega": omega, "omega_prime": omega_prime, "k": k, "c": c, "h": inner.h});
    let report = CheckReport::from_rows("replay_dm_proof", inputs, rows, true)
        .with_empirical(lk_outer / lk_inner)
        .with_index_base(0)
        .with_provenance(fem_provenance(inner.h, u_outer.max(u_target).max(u_inner)));
    Ok(DmReplay {
        certificate,
        report,
        radius,
        net,
    })
}

pub fn replay_dm_proof(
    omega: &ConvexPolygon,
    omega_prime: &ConvexPolygon,
    k: usize,
    c: f64,
    h: f64,
) -> Result<DmReplay, VerifyError> {
    nested(omega_prime, omega)?;
    let opts = FemOptions::new(h);
    let inner = polygon_spectrum(omega, &BoundarySpec::AllNeumann, k + 1, &opts)?;
    let outer = polygon_spectrum(omega_prime, &BoundarySpec::AllNeumann, k + 1, &opts)?;
    replay_dm_proof_from(omega, omega_prime, k, c, &inner, &outer)
}

/// Smallest `c` on a geometric grid (ratio 1.01) for which the replay
/// succeeds, scanning down from a value whose net is a single point.
pub fn smallest_sufficient_c(
    omega: &ConvexPolygon,
    omega_prime: &ConvexPolygon,
    k: usize,
    inner: &Spectrum,
    outer: &Spectrum,
) -> Result<f64, VerifyError> {
    let (lk, _) = lambda(outer, k)?;
    let mut c = 1.01 * omega_prime.diameter() * lk.sqrt() / 2.0;
    let first = replay_dm_proof_from(omega, omega_prime, k, c, inner, outer)?;
    if !first.report.pass {
        return Err(VerifyError::InvalidArgument(format!("replay fails even for c = {c}")));
    }
    for _ in 0..5000 {
        let next = c / 1.01;
        match replay_dm_proof_from(omega, omega_prime, k, next, inner, outer) {
            Ok(r) if r.report.pass => c = next,
            Ok(_) | Err(VerifyError::NetTooLarge { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(c)
}

/// Checks a covering of `P` by convex cells and compares its certified
/// lower bound with `λ_l^N(P)`, where `l` is the number of cells.
pub fn certified_neumann_lower_bound(
    p: &ConvexPolygon,
    partition: &Partition,
    spec: &Spectrum,
) -> Result<(BoundCertificate, CheckReport), VerifyError> {
    if partition.cells.is_empty() || partition.cells.iter().any(|c| !p.contains_polygon(c)) {
        return Err(VerifyError::NotACovering);
    }
    let area = p.area();
    let defect = (partition.total_area() - area) / area;
    let covers = if partition.multiplicity <= 1 {
        defect.abs() <= 1e-9
    } else {
        defect >= -1e-9 && partition.covers(p, p.diameter() / 256.0)
    };
    if !covers {
        return Err(VerifyError::NotACovering);
    }
    let cert = BoundCertificate::from_partition(p, partition);
    let (l, u) = lambda(spec, cert.target_index)?;
    let rows = vec![CheckRow::le(cert.certified_lambda_lower, l, FEM_SLACK * u * l + 1e-12 * l).with_k(cert.target_index)];
    let inputs = json!({"polygon": p, "cells": partition.cells, "multiplicity": partition.multiplicity});
    let report = CheckReport::from_rows("certified_neumann_lower_bound", inputs, rows, true)
        .with_index_base(0)
        .with_provenance(Provenance {
            h: spec.h,
            fem_uncertainty: spec.h.map(|_| u),
            ..Provenance::default()
        });
    Ok((cert, report))
}

/// `c = r√λ_l / n` for a net of `l + 1` points with separation `r` in
/// dimension `n`, given the Neumann spectrum of the domain.
pub fn keylemma_constant_for_net(net: &PointSet, n: usize, spec: &Spectrum) -> Result<CheckReport, VerifyError> {
    if net.is_empty() || n == 0 {
        return Err(VerifyError::InvalidArgument("empty net".into()));
    }
    let l = net.len() - 1;
    let (lambda_l, u) = if l == 0 { (0.0, 0.0) } else { lambda(spec, l)? };
    let c = net.separation * lambda_l.sqrt() / n as f64;
    let inputs = json!({"domain": spec.domain, "n": n, "net": net});
    Ok(CheckReport::from_rows("keylemma_constant", inputs, vec![CheckRow::measured(c).with_k(l)], false)
        .with_empirical(c)
        .with_index_base(0)
        .with_provenance(Provenance {
            h: spec.h,
            fem_uncertainty: spec.h.map(|_| u),
            enumerated: spec.h.is_none().then_some(spec.len()),
            ..Provenance::default()
        }))
}

/// Key-lemma constant for a greedy net in a polygon, with FEM eigenvalues.
pub fn keylemma_constant(p: &ConvexPolygon, r: f64, probe_step: f64, h: f64) -> Result<CheckReport, VerifyError> {
    let net = maximal_separated_net(NetDomain::Polygon(p), r, probe_step)?;
    let spec = polygon_spectrum(p, &BoundarySpec::AllNeumann, net.len(), &FemOptions::new(h))?;
    keylemma_constant_for_net(&net, 2, &spec)
}

/// Key-lemma constant for a greedy net in a box of any dimension, with
/// exact eigenvalues.
pub fn keylemma_constant_box(b: &BoxDomain, r: f64, probe_step: f64) -> Result<CheckReport, VerifyError> {
    let net = maximal_separated_net(NetDomain::Box(b), r, probe_step)?;
    let spec = box_spectrum(b, BoxBc::Neumann, net.len())?;
    keylemma_constant_for_net(&net, b.dim(), &spec)
}

/// First Dirichlet eigenvalue of a ball of radius `r/4` in dimension `n`,
/// `(4/r)² j²_{n/2-1,1}`. In the plane it is also compared with FEM on a
/// 512-gon when `h` is given.
pub fn cheng_ball_check(n: usize, r: f64, h: Option<f64>) -> Result<CheckReport, VerifyError> {
    if !(2..=3).contains(&n) || !(r > 0.0) {
        return Err(VerifyError::InvalidArgument(format!("n = {n}, r = {r}")));
    }
    let j = bessel_first_zero(n as f64 / 2.0 - 1.0, BesselKind::J)?;
    let closed = (4.0 / r).powi(2) * j * j;
    let mut prov = Provenance::default();
    let rows = match (n, h) {
        (2, Some(h)) => {
            let disk = ConvexPolygon::regular(512, r / 4.0, Point::new(0.0, 0.0))?;
            let s = polygon_spectrum(&disk, &BoundarySpec::AllDirichlet, 1, &FemOptions::new(h))?;
            let fem = s.eigenvalues[0];
            prov = fem_provenance(s.h, s.uncertainty_of(1));
            vec![CheckRow::le(((fem - closed) / closed).abs(), 0.01, 0.0).with_value(fem)]
        }
        _ => vec![CheckRow::measured(closed)],
    };
    Ok(CheckReport::from_rows("cheng_ball", json!({"n": n, "r": r, "h": h}), rows, true)
        .with_empirical(closed)
        .with_index_base(1)
        .with_provenance(prov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::box_spectrum;
    use crate::nets::voronoi_partition;
    use std::f64::consts::PI;

    fn square_neumann(count: usize) -> Spectrum {
        box_spectrum(&BoxDomain::cube(2, 1.0).unwrap(), BoxBc::Neumann, count).unwrap()
    }

    fn with_domain(mut s: Spectrum, p: &ConvexPolygon) -> Spectrum {
        s.domain = crate::spectrum::Domain::Polygon {
            vertices: p.vertices().to_vec(),
        };
        s
    }

    #[test]
    fn replay_unit_square_k4() {
        let sq = ConvexPolygon::unit_square();
        let s = with_domain(square_neumann(6), &sq);
        let r = replay_dm_proof_from(&sq, &sq, 4, 3.0, &s, &s).unwrap();
        assert!((r.radius - 3.0 / PI).abs() < 1e-12);
        assert!(r.net.len() <= 4);
        assert!(r.report.pass, "{:?}", r.report);
        let bound = 4.0 * PI * PI / 48.0f64.powi(2);
        assert!(r.certificate.certified_lambda_lower >= bound * (1.0 - 1e-12));
        assert!((bound - 1.0 / (64.0 * r.radius * r.radius)).abs() < 1e-12);
    }

    #[test]
    fn replay_single_cell() {
        let sq = ConvexPolygon::unit_square();
        let s = square_neumann(3);
        let r = replay_dm_proof_from(&sq, &sq, 1, 100.0, &s, &s).unwrap();
        assert_eq!(r.net.len(), 1);
        assert_eq!(r.certificate.cells.len(), 1);
        assert!((r.certificate.certified_lambda_lower - 0.125).abs() < 1e-12);
        assert!(r.report.pass);
    }

    #[test]
    fn replay_rejects_small_c() {
        let sq = ConvexPolygon::unit_square();
        let s = square_neumann(6);
        assert!(matches!(
            replay_dm_proof_from(&sq, &sq, 4, 0.2, &s, &s),
            Err(VerifyError::NetTooLarge { .. })
        ));
        let c = smallest_sufficient_c(&sq, &sq, 4, &s, &s).unwrap();
        assert!(replay_dm_proof_from(&sq, &sq, 4, c, &s, &s).unwrap().report.pass);
        assert!(replay_dm_proof_from(&sq, &sq, 4, c / 1.01, &s, &s).is_err());
    }

    #[test]
    fn not_nested() {
        let sq = ConvexPolygon::unit_square();
        let big = ConvexPolygon::rectangle(0.0, 0.0, 2.0, 1.0).unwrap();
        let s = square_neumann(3);
        assert_eq!(replay_dm_proof_from(&big, &sq, 1, 1.0, &s, &s).unwrap_err(), VerifyError::NotNested);
        assert_eq!(dirichlet_monotonicity_check(&big, &sq, 1, 0.2).unwrap_err(), VerifyError::NotNested);
    }

    #[test]
    fn certificate_examples() {
        let sq = ConvexPolygon::unit_square();
        let s = square_neumann(6);
        let one = Partition::from_cells(vec![sq.clone()], 0.01).unwrap();
        let (c, r) = certified_neumann_lower_bound(&sq, &one, &s).unwrap();
        assert!((c.certified_lambda_lower - 0.125).abs() < 1e-12 && r.pass);
        assert!((r.rhs - PI * PI).abs() < 1e-12);
        let sites = PointSet::from_planar(
            &[
                Point::new(0.25, 0.25),
                Point::new(0.75, 0.25),
                Point::new(0.25, 0.75),
                Point::new(0.75, 0.75),
            ],
            0.5,
        );
        let quads = voronoi_partition(&sq, &sites).unwrap();
        let (c, r) = certified_neumann_lower_bound(&sq, &quads, &s).unwrap();
        assert!((c.certified_lambda_lower - 0.5).abs() < 1e-12 && r.pass);
        assert!((r.rhs - 4.0 * PI * PI).abs() < 1e-12);

        let rect = ConvexPolygon::rectangle(0.0, 0.0, 4.0, 1.0).unwrap();
        let cells = (0..4)
            .map(|i| ConvexPolygon::rectangle(i as f64, 0.0, i as f64 + 1.0, 1.0).unwrap())
            .collect();
        let part = Partition::from_cells(cells, 0.01).unwrap();
        let rs = box_spectrum(&BoxDomain::new(vec![4.0, 1.0]).unwrap(), BoxBc::Neumann, 6).unwrap();
        let (c, r) = certified_neumann_lower_bound(&rect, &part, &rs).unwrap();
        assert!((c.certified_lambda_lower - 0.125).abs() < 1e-12 && r.pass);
        assert!((r.rhs - PI * PI).abs() < 1e-12);

        let half = Partition::from_cells(vec![ConvexPolygon::rectangle(0.0, 0.0, 0.5, 1.0).unwrap()], 0.01).unwrap();
        assert_eq!(certified_neumann_lower_bound(&sq, &half, &s).unwrap_err(), VerifyError::NotACovering);
    }

    #[test]
    fn keylemma_examples() {
        let grid: Vec<Point> = (0..9).map(|i| Point::new((i % 3) as f64 * 0.5, (i / 3) as f64 * 0.5)).collect();
        let net = PointSet::from_planar(&grid, 0.5);
        let c = keylemma_constant_for_net(&net, 2, &square_neumann(9)).unwrap();
        assert!((c.empirical.unwrap() - 2.0f64.sqrt() * PI / 2.0).abs() < 1e-12);
        let single = keylemma_constant_box(&BoxDomain::cube(2, 1.0).unwrap(), 2.0, 0.2).unwrap();
        assert_eq!(single.empirical, Some(0.0));
        let c4 = keylemma_constant_box(&BoxDomain::cube(4, 1.0).unwrap(), 0.5, 0.05).unwrap();
        assert!(c4.pass && c4.empirical.unwrap() > 0.0);
    }

    #[test]
    fn cheng_closed_forms() {
        let c3 = cheng_ball_check(3, 4.0, None).unwrap();
        assert!((c3.empirical.unwrap() - PI * PI).abs() < 1e-9);
        let a = cheng_ball_check(2, 4.0, None).unwrap().empirical.unwrap();
        let b = cheng_ball_check(2, 8.0, None).unwrap().empirical.unwrap();
        assert!((a - 5.783185962946784).abs() < 1e-9 && (b - a / 4.0).abs() < 1e-12);
        assert!(cheng_ball_check(4, 1.0, None).is_err());
    }

    #[test]
    fn cheng_fem_disk() {
        let c = cheng_ball_check(2, 4.0, Some(0.08)).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn monotonicity_and_ratio_fem() {
        let sq = ConvexPolygon::unit_square();
        let small = ConvexPolygon::rectangle(0.25, 0.25, 0.75, 0.75).unwrap();
        let m = dirichlet_monotonicity_check(&small, &sq, 3, 0.05).unwrap();
        assert!(m.pass);
        assert!((m.rows[0].value.unwrap() - 4.0).abs() < 0.05);
        let same = dirichlet_monotonicity_check(&sq, &sq, 3, 0.1).unwrap();
        assert!(same.pass && same.rows.iter().all(|r| r.margin.abs() < 1e-9));
        let slab = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 0.05).unwrap();
        let d = dm_ratio(&slab, &sq, 1, 0.025).unwrap();
        assert!((d.empirical.unwrap() - 1.0).abs() < 0.01, "{d:?}");
    }
}
