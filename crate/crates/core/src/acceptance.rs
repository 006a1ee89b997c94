//! The acceptance suite: twelve end-to-end criteria, each reduced to a
//! pass/fail verdict with the underlying reports attached.

use crate::analytic::{
    bessel_first_zero, box_spectrum, disk_spectrum, torus_spectrum, BesselKind, BoxBc,
};
use crate::corpus::{point_in_polygon, random_polygon, rng, ExperimentConfig, DEFAULT_VERTEX_RANGE};
use crate::discretize::{triangulate, BoundarySpec};
use crate::eigsolve::EigenOptions;
use crate::experiment::{corpus_spectra, dm_experiment, mesh_size_for, DmSummary, PairSpectra};
use crate::fem::{mesh_eigenvalues, polygon_spectrum, FemOptions};
use crate::geom::{BoxDomain, ConvexPolygon, Point};
use crate::nets::{voronoi_partition, PointSet};
use crate::verify::{
    bishop_gromov_check, boundary_concentration_from, brunn_minkowski_check, certified_neumann_lower_bound,
    cheng_ball_check, closed_manifold_check, keylemma_constant, keylemma_constant_box, keylemma_constant_for_net,
    mixed_concentration_from, polya_check, CheckReport, CheckRow, MC_SEED,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::Instant;

pub const CRITERIA: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    /// Nested pairs for the monotonicity, ratio and certificate criteria.
    pub pairs: usize,
    pub kmax: usize,
    /// Mesh size for single-domain accuracy checks.
    pub h: f64,
    /// Coarse mesh size for corpus runs; values come from one refinement.
    pub corpus_h: f64,
    pub mc_samples: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: 1,
            pairs: 50,
            kmax: 10,
            h: 0.02,
            corpus_h: 0.04,
            mc_samples: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub summary: String,
    pub metrics: serde_json::Value,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub reports: Vec<CheckReport>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {} ({:.1} s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.summary,
            self.seconds
        )
    }
}

struct Outcome {
    pass: bool,
    summary: String,
    metrics: serde_json::Value,
    reports: Vec<CheckReport>,
}

type Run = Result<Outcome, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn failures(reports: &[CheckReport]) -> usize {
    reports.iter().filter(|r| !r.pass).count()
}

pub fn criterion_name(id: usize) -> &'static str {
    match id {
        1 => "fem_square_neumann",
        2 => "fem_square_mixed",
        3 => "disk_oracle",
        4 => "dirichlet_monotonicity",
        5 => "nested_neumann_ratio",
        6 => "net_eigenvalue_constant",
        7 => "boundary_concentration",
        8 => "bishop_gromov_brunn_minkowski",
        9 => "certificate_soundness",
        10 => "polya_kroger",
        11 => "li_yau_torus",
        12 => "enumerator_oracle",
        _ => "unknown",
    }
}

/// Runs criteria and caches the corpus they share.
pub struct Acceptance {
    pub cfg: AcceptanceConfig,
    corpus: OnceLock<Result<Vec<PairSpectra>, String>>,
    dm: OnceLock<Result<DmSummary, String>>,
}

impl Acceptance {
    pub fn new(cfg: AcceptanceConfig) -> Self {
        Acceptance {
            cfg,
            corpus: OnceLock::new(),
            dm: OnceLock::new(),
        }
    }

    pub fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            seed: self.cfg.seed,
            corpus_size: self.cfg.pairs,
            kmax: self.cfg.kmax,
            h: self.cfg.corpus_h,
            ..ExperimentConfig::default()
        }
    }

    fn corpus(&self) -> Result<&[PairSpectra], String> {
        self.corpus
            .get_or_init(|| corpus_spectra(&self.experiment_config()).map_err(err))
            .as_deref()
            .map_err(Clone::clone)
    }

    fn dm(&self) -> Result<&DmSummary, String> {
        self.dm
            .get_or_init(|| dm_experiment(self.corpus()?, self.cfg.kmax).map_err(err))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn run(&self, id: usize) -> CriterionResult {
        let start = Instant::now();
        let outcome = match id {
            1 => self.fem_square_neumann(),
            2 => self.fem_square_mixed(),
            3 => self.disk_oracle(),
            4 => self.dirichlet_monotonicity(),
            5 => self.nested_neumann_ratio(),
            6 => self.net_eigenvalue_constant(),
            7 => self.boundary_concentration(),
            8 => self.bishop_gromov_brunn_minkowski(),
            9 => self.certificate_soundness(),
            10 => self.polya_kroger(),
            11 => self.li_yau_torus(),
            12 => self.enumerator_oracle(),
            _ => Err(format!("no criterion {id}")),
        };
        let seconds = start.elapsed().as_secs_f64();
        let (pass, summary, metrics, reports) = match outcome {
            Ok(o) => (o.pass, o.summary, o.metrics, o.reports),
            Err(e) => (false, format!("error: {e}"), serde_json::Value::Null, Vec::new()),
        };
        CriterionResult {
            id,
            name: criterion_name(id).to_string(),
            pass,
            summary,
            metrics,
            seconds,
            reports,
        }
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        (1..=CRITERIA).map(|id| self.run(id)).collect()
    }

    fn fem_square_neumann(&self) -> Run {
        let start = Instant::now();
        let sq = ConvexPolygon::unit_square();
        let exact = box_spectrum(&BoxDomain::cube(2, 1.0).map_err(err)?, BoxBc::Neumann, 11).map_err(err)?;
        let mesh = triangulate(&sq, self.cfg.h).map_err(err)?.tag_boundary(&BoundarySpec::AllNeumann);
        let opts = EigenOptions::default();
        let (coarse, _) = mesh_eigenvalues(&mesh, 11, &opts).map_err(err)?;
        let rows: Vec<CheckRow> = (1..=10)
            .map(|k| {
                let rel = (coarse[k] - exact.eigenvalues[k]).abs() / exact.eigenvalues[k];
                CheckRow::le(rel, 0.01, 0.0).with_k(k).with_value(coarse[k])
            })
            .collect();
        let worst = rows.iter().map(|r| r.lhs).fold(0.0, f64::max);
        let (fine, _) = mesh_eigenvalues(&mesh.refine(), 2, &opts).map_err(err)?;
        let pi2 = PI * PI;
        let factor = (coarse[1] - pi2).abs() / (fine[1] - pi2).abs();
        let seconds = start.elapsed().as_secs_f64();
        let reports = vec![
            CheckReport::from_rows("fem_oracle", json!({"domain": "unit_square", "h": self.cfg.h}), rows, true)
                .with_index_base(0),
            CheckReport::from_rows(
                "richardson_factor",
                json!({"h": self.cfg.h}),
                vec![CheckRow::le(3.5, factor, 0.0).with_k(1)],
                true,
            ),
            CheckReport::from_rows("runtime", json!({}), vec![CheckRow::le(seconds, 30.0, 0.0)], false),
        ];
        Ok(Outcome {
            pass: failures(&reports) == 0,
            summary: format!(
                "max rel err λ1..λ10 = {:.3}% (≤ 1%), refinement factor {:.2} (≥ 3.5), {:.1} s (< 30 s), {} dofs",
                100.0 * worst,
                factor,
                seconds,
                mesh.num_vertices()
            ),
            metrics: json!({"max_rel_err": worst, "refinement_factor": factor, "seconds": seconds}),
            reports,
        })
    }

    fn fem_square_mixed(&self) -> Run {
        let sq = ConvexPolygon::unit_square();
        let spec = BoundarySpec::neumann_edges(&sq, &[3]).map_err(err)?;
        let s = polygon_spectrum(&sq, &spec, 1, &FemOptions::single(self.cfg.h)).map_err(err)?;
        let exact = 1.25 * PI * PI;
        let rel = (s.eigenvalues[0] - exact).abs() / exact;
        let report = CheckReport::from_rows(
            "fem_mixed_oracle",
            json!({"domain": "unit_square", "neumann_edge": "left", "h": self.cfg.h}),
            vec![CheckRow::le(rel, 0.01, 0.0).with_k(1).with_value(s.eigenvalues[0])],
            true,
        );
        Ok(Outcome {
            pass: report.pass,
            summary: format!("λ1 = {:.5} vs 5π²/4 = {exact:.5}, rel err {:.3}% (≤ 1%)", s.eigenvalues[0], 100.0 * rel),
            metrics: json!({"lambda1": s.eigenvalues[0], "rel_err": rel}),
            reports: vec![report],
        })
    }

    fn disk_oracle(&self) -> Run {
        // The FEM values come from one refinement of a mesh twice as coarse.
        let cheng = cheng_ball_check(2, 4.0, Some(2.0 * self.cfg.h)).map_err(err)?;
        let fem = cheng.rows[0].value.unwrap_or(f64::NAN);
        let zero = bessel_first_zero(0.5, BesselKind::J).map_err(err)?;
        let zero_err = (zero - PI).abs();
        let bessel = CheckReport::from_rows(
            "bessel_zero",
            json!({"nu": 0.5}),
            vec![CheckRow::le(zero_err, 1e-10, 0.0).with_value(zero)],
            true,
        );
        let closed = cheng.empirical.unwrap_or(f64::NAN);
        Ok(Outcome {
            pass: cheng.pass && bessel.pass,
            summary: format!(
                "512-gon λ1^D = {fem:.5} vs j01² = {closed:.5} (rel err {:.3}%, ≤ 1%); |j_(1/2),1 − π| = {zero_err:.1e}",
                100.0 * cheng.rows[0].lhs
            ),
            metrics: json!({"fem": fem, "closed_form": closed, "bessel_zero_error": zero_err}),
            reports: vec![cheng, bessel],
        })
    }

    fn dirichlet_monotonicity(&self) -> Run {
        let dm = self.dm()?;
        let violations: usize = dm.monotonicity.iter().map(CheckReport::violations).sum();
        let worst_u = dm
            .monotonicity
            .iter()
            .filter_map(|r| r.provenance.fem_uncertainty)
            .fold(0.0, f64::max);
        Ok(Outcome {
            pass: violations == 0 && dm.monotonicity.len() == self.cfg.pairs,
            summary: format!(
                "{} pairs, k ≤ {}: {violations} violations beyond 3× FEM uncertainty (largest u = {:.2e})",
                dm.monotonicity.len(),
                dm.kmax,
                worst_u
            ),
            metrics: json!({"pairs": dm.monotonicity.len(), "violations": violations, "max_uncertainty": worst_u}),
            reports: dm.monotonicity.clone(),
        })
    }

    fn nested_neumann_ratio(&self) -> Run {
        let dm = self.dm()?;
        let finite = dm.ratios.iter().all(|r| r.pass);
        let identity_ok = dm
            .replays
            .iter()
            .flat_map(|r| &r.rows)
            .filter(|row| row.label.as_deref() == Some("identity"))
            .all(|row| row.pass);
        let replays_ok = dm.replays.iter().all(|r| r.pass);
        let mut reports = dm.ratios.clone();
        reports.extend(dm.replays.iter().cloned());
        Ok(Outcome {
            pass: finite && identity_ok && replays_ok && dm.ratios.len() == self.cfg.pairs,
            summary: format!(
                "{} pairs, k ≤ {}: max λk(Ω')/λk(Ω) = {:.4}, smallest sufficient c = {:.4} \
                 ({} replays pass, certificate identity {})",
                dm.ratios.len(),
                dm.kmax,
                dm.max_ratio,
                dm.sufficient_c,
                dm.replays.iter().filter(|r| r.pass).count(),
                if identity_ok { "exact" } else { "violated" }
            ),
            metrics: json!({"max_ratio": dm.max_ratio, "sufficient_c": dm.sufficient_c, "replays": dm.replays.len()}),
            reports,
        })
    }

    fn net_eigenvalue_constant(&self) -> Run {
        let mut reports = Vec::new();
        let sq = ConvexPolygon::unit_square();
        for r in [0.25, 0.5] {
            reports.push(
                keylemma_constant(&sq, r, r / 16.0, self.cfg.corpus_h)
                    .map_err(err)?
                    .with_instance(format!("square_fem/r{r}")),
            );
        }
        for n in 2..=6 {
            let cube = BoxDomain::cube(n, 1.0).map_err(err)?;
            for r in [0.25, 0.5] {
                reports.push(
                    keylemma_constant_box(&cube, r, r / 10.0)
                        .map_err(err)?
                        .with_instance(format!("cube{n}/r{r}")),
                );
            }
        }
        let grid: Vec<Point> = (0..9)
            .map(|i| Point::new((i % 3) as f64 * 0.5, (i / 3) as f64 * 0.5))
            .collect();
        let exact_spec = box_spectrum(&BoxDomain::cube(2, 1.0).map_err(err)?, BoxBc::Neumann, 9).map_err(err)?;
        let exact = keylemma_constant_for_net(&PointSet::from_planar(&grid, 0.5), 2, &exact_spec)
            .map_err(err)?
            .with_instance("square_grid3x3");
        let exact_c = exact.empirical.unwrap_or(f64::NAN);
        let constant = reports.iter().filter_map(|r| r.empirical).fold(0.0, f64::max);
        let all_finite = reports.iter().all(|r| r.pass);
        let exact_ok = (exact_c - 2.2214).abs() <= 1e-3;
        let per_run: Vec<String> = reports
            .iter()
            .map(|r| format!("{}={:.3}", r.instance, r.empirical.unwrap_or(f64::NAN)))
            .collect();
        reports.push(exact);
        Ok(Outcome {
            pass: all_finite && exact_ok,
            summary: format!(
                "c_emp ≤ {constant:.4} over {} runs [{}]; 3×3 grid c_emp = {exact_c:.4} (2.2214 ± 1e-3)",
                per_run.len(),
                per_run.join(", ")
            ),
            metrics: json!({"constant": constant, "grid_instance": exact_c}),
            reports,
        })
    }

    fn boundary_concentration(&self) -> Run {
        let mut reports = Vec::new();
        let sweep = |rho: f64| -> Vec<f64> { (1..=10).map(|j| rho * j as f64 / 10.0).collect() };

        for (a, b) in [(1.0, 1.0), (2.0, 0.5), (1.0, 3.0)] {
            let rect = ConvexPolygon::rectangle(0.0, 0.0, a, b).map_err(err)?;
            let rs = sweep(rect.inradius());
            let dirichlet = PI * PI * (1.0 / (a * a) + 1.0 / (b * b));
            for &r in &rs {
                reports.push(boundary_concentration_from(&rect, r, dirichlet, 0.0, None).with_instance(format!("rect{a}x{b}")));
            }
            // Neumann on the left edge separates to sin(πx/2a)·sin(πy/b).
            let left = BoundarySpec::neumann_edges(&rect, &[3]).map_err(err)?;
            let mixed = PI * PI * (0.25 / (a * a) + 1.0 / (b * b));
            let rs_mixed = sweep(a.min(b / 2.0));
            for rep in mixed_concentration_from(&rect, &left, &rs_mixed, mixed, 0.0, None, 0, MC_SEED).map_err(err)? {
                reports.push(rep.with_instance(format!("rect{a}x{b}/left_neumann")));
            }
        }

        let disk = ConvexPolygon::regular(512, 1.0, Point::new(0.0, 0.0)).map_err(err)?;
        let j = disk_spectrum(1.0, BoxBc::Dirichlet, 1).map_err(err)?.eigenvalues[0];
        for r in sweep(disk.inradius()) {
            reports.push(boundary_concentration_from(&disk, r, j, 0.0, None).with_instance("disk512"));
        }

        let mut mc_reports = 0;
        let mut rng = rng(self.cfg.seed.wrapping_add(7_000));
        for i in 0..20 {
            let p = random_polygon(&mut rng, DEFAULT_VERTEX_RANGE).map_err(err)?;
            let opts = FemOptions::new(mesh_size_for(&p, self.cfg.corpus_h));
            let rs = sweep(p.inradius());
            let d = polygon_spectrum(&p, &BoundarySpec::AllDirichlet, 1, &opts).map_err(err)?;
            for &r in &rs {
                reports.push(
                    boundary_concentration_from(&p, r, d.eigenvalues[0], d.uncertainty_of(1), d.h)
                        .with_instance(format!("poly{i}")),
                );
            }
            let perimeter = p.perimeter();
            let start = rng.random::<f64>() * perimeter;
            let len = perimeter * rng.random_range(0.2..0.6);
            let intervals = if start + len <= perimeter {
                vec![[start, start + len]]
            } else {
                vec![[0.0, start + len - perimeter], [start, perimeter]]
            };
            let spec = BoundarySpec::neumann_intervals(intervals, perimeter).map_err(err)?;
            let m = polygon_spectrum(&p, &spec, 1, &opts).map_err(err)?;
            let mixed = mixed_concentration_from(
                &p,
                &spec,
                &rs,
                m.eigenvalues[0],
                m.uncertainty_of(1),
                m.h,
                self.cfg.mc_samples,
                MC_SEED,
            )
            .map_err(err)?;
            mc_reports += mixed.len();
            reports.extend(mixed.into_iter().map(|r| r.with_instance(format!("poly{i}/mixed"))));
        }
        let bad = failures(&reports);
        let tightest = reports
            .iter()
            .filter(|r| r.lhs > 0.0)
            .map(|r| r.lhs / r.rhs)
            .fold(0.0, f64::max);
        Ok(Outcome {
            pass: bad == 0,
            summary: format!(
                "{} checks ({mc_reports} Monte Carlo at {} samples): {bad} violations, largest lhs/rhs = {tightest:.3}",
                reports.len(),
                self.cfg.mc_samples
            ),
            metrics: json!({"checks": reports.len(), "violations": bad, "max_lhs_over_rhs": tightest}),
            reports,
        })
    }

    fn bishop_gromov_brunn_minkowski(&self) -> Run {
        let mut rng = rng(self.cfg.seed.wrapping_add(8_000));
        let mut bgi = Vec::with_capacity(200);
        for i in 0..200 {
            let p = random_polygon(&mut rng, DEFAULT_VERTEX_RANGE).map_err(err)?;
            let x = point_in_polygon(&mut rng, &p);
            let big_r = p.diameter() * rng.random_range(0.05..=1.0);
            let r = big_r * rng.random_range(0.05..0.95);
            bgi.push(bishop_gromov_check(&p, x, r, big_r).map_err(err)?.with_instance(format!("bgi{i}")));
        }
        let mut bmi = Vec::with_capacity(100);
        for i in 0..100 {
            let a = random_polygon(&mut rng, DEFAULT_VERTEX_RANGE).map_err(err)?;
            let b = random_polygon(&mut rng, DEFAULT_VERTEX_RANGE).map_err(err)?;
            let t = rng.random::<f64>();
            bmi.push(brunn_minkowski_check(&a, &b, t).map_err(err)?.with_instance(format!("bmi{i}")));
        }
        let corner = bishop_gromov_check(&ConvexPolygon::unit_square(), Point::new(0.0, 0.0), 0.5, 1.0)
            .map_err(err)?
            .with_instance("corner");
        let corner_ratio = corner.rows[0].rhs;
        let corner_ok = corner.pass && (corner_ratio - 0.25).abs() <= 1e-12;
        let (bad_bgi, bad_bmi) = (failures(&bgi), failures(&bmi));
        let mut reports = bgi;
        reports.extend(bmi);
        reports.push(corner);
        Ok(Outcome {
            pass: bad_bgi == 0 && bad_bmi == 0 && corner_ok,
            summary: format!(
                "200 ball-ratio quadruples: {bad_bgi} violations; 100 Minkowski triples: {bad_bmi} violations; \
                 corner ratio = {corner_ratio:.15}"
            ),
            metrics: json!({"bgi_violations": bad_bgi, "bmi_violations": bad_bmi, "corner_ratio": corner_ratio}),
            reports,
        })
    }

    fn certificate_soundness(&self) -> Run {
        let pairs = self.corpus()?;
        let mut reports = Vec::new();
        let mut rng = rng(self.cfg.seed.wrapping_add(9_000));
        let mut tightest = 0.0f64;
        for (i, pair) in pairs.iter().enumerate() {
            let m = 1 + i % self.cfg.kmax;
            let sites: Vec<Point> = (0..m).map(|_| point_in_polygon(&mut rng, &pair.outer)).collect();
            let partition = voronoi_partition(&pair.outer, &PointSet::from_planar(&sites, 0.0)).map_err(err)?;
            let (cert, report) =
                certified_neumann_lower_bound(&pair.outer, &partition, &pair.outer_neumann).map_err(err)?;
            tightest = tightest.max(cert.certified_lambda_lower / report.rhs);
            reports.push(report.with_instance(format!("pair{}/cells{m}", pair.seed)));
        }
        let sq = ConvexPolygon::unit_square();
        let quads = PointSet::from_planar(
            &[
                Point::new(0.25, 0.25),
                Point::new(0.75, 0.25),
                Point::new(0.25, 0.75),
                Point::new(0.75, 0.75),
            ],
            0.5,
        );
        let spec = box_spectrum(&BoxDomain::cube(2, 1.0).map_err(err)?, BoxBc::Neumann, 5).map_err(err)?;
        let (cert, quad) =
            certified_neumann_lower_bound(&sq, &voronoi_partition(&sq, &quads).map_err(err)?, &spec).map_err(err)?;
        let quad_ok = quad.pass
            && (cert.certified_lambda_lower - 0.5).abs() <= 1e-12
            && (quad.rhs - 4.0 * PI * PI).abs() <= 1e-9;
        let bad = failures(&reports);
        let n = reports.len();
        reports.push(quad.with_instance("square_quadrants"));
        Ok(Outcome {
            pass: bad == 0 && quad_ok && n == self.cfg.pairs,
            summary: format!(
                "{n} Voronoi certificates: {bad} violations, largest certified/λ = {tightest:.4}; \
                 quadrants certify {:.4} ≤ λ4 = {:.4}",
                cert.certified_lambda_lower,
                4.0 * PI * PI
            ),
            metrics: json!({"certificates": n, "violations": bad, "max_certified_over_lambda": tightest}),
            reports,
        })
    }

    fn polya_kroger(&self) -> Run {
        let start = Instant::now();
        let kmax = 10_000;
        let mut reports = Vec::new();
        let shapes = [1.0, 1.5, 0.75, 1.25, 0.9];
        for n in 2..=5 {
            for lengths in [vec![1.0; n], shapes[..n].to_vec()] {
                let b = BoxDomain::new(lengths.clone()).map_err(err)?;
                let s = box_spectrum(&b, BoxBc::Neumann, kmax + 1).map_err(err)?;
                for r in polya_check(&s, n, b.volume(), kmax).map_err(err)? {
                    reports.push(r.with_instance(format!("box{lengths:?}")));
                }
            }
        }
        let disk = disk_spectrum(1.0, BoxBc::Neumann, 101).map_err(err)?;
        for r in polya_check(&disk, 2, PI, 100).map_err(err)? {
            reports.push(r.with_instance("unit_disk"));
        }
        let seconds = start.elapsed().as_secs_f64();
        let bad = failures(&reports);
        let worst_polya = reports
            .iter()
            .filter(|r| r.check == "polya")
            .filter_map(|r| r.empirical)
            .fold(0.0, f64::max);
        Ok(Outcome {
            pass: bad == 0 && seconds < 120.0,
            summary: format!(
                "{} sweeps (boxes n = 2..5 to k = {kmax}, disk to k = 100): {bad} violations, \
                 max λk/Pólya(k) = {worst_polya:.4}, {seconds:.1} s (< 120 s)",
                reports.len() / 2
            ),
            metrics: json!({"violations": bad, "max_polya_ratio": worst_polya, "seconds": seconds}),
            reports,
        })
    }

    fn li_yau_torus(&self) -> Run {
        let mut reports = Vec::new();
        let mut monotone = true;
        let mut constants = Vec::new();
        for n in 2..=5 {
            let mut prev = f64::INFINITY;
            let mut row = Vec::new();
            for stretch in [1.0, 2.0, 4.0] {
                let mut lengths = vec![1.0; n];
                lengths[n - 1] = stretch;
                let r = closed_manifold_check(&lengths, 1000)
                    .map_err(err)?
                    .with_instance(format!("torus{lengths:?}"));
                let c = r.empirical.unwrap_or(f64::NAN);
                monotone &= c <= prev * (1.0 + 1e-12);
                prev = c;
                row.push(c);
                reports.push(r);
            }
            constants.push(json!({"n": n, "constants": row}));
        }
        let bad = failures(&reports);
        let unit: Vec<String> = constants
            .iter()
            .map(|c| format!("n={}: {:.3}", c["n"], c["constants"][0].as_f64().unwrap_or(f64::NAN)))
            .collect();
        Ok(Outcome {
            pass: bad == 0 && monotone,
            summary: format!(
                "{} tori, k ≤ 1000: {bad} violations; constants on unit tori [{}]; \
                 nonincreasing under elongation ×1, ×2, ×4: {monotone}",
                reports.len(),
                unit.join(", ")
            ),
            metrics: json!({"violations": bad, "constants": constants, "monotone": monotone}),
            reports,
        })
    }

    fn enumerator_oracle(&self) -> Run {
        let mut rng = rng(self.cfg.seed.wrapping_add(12_000));
        let mut mismatches = Vec::new();
        let mut compared = 0;
        for i in 0..20 {
            let n = rng.random_range(1..=4);
            let lengths: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
            let kind = i % 3;
            let count = 300;
            let fast = match kind {
                0 => box_spectrum(&BoxDomain::new(lengths.clone()).map_err(err)?, BoxBc::Neumann, count),
                1 => box_spectrum(&BoxDomain::new(lengths.clone()).map_err(err)?, BoxBc::Dirichlet, count),
                _ => torus_spectrum(&lengths, count),
            }
            .map_err(err)?
            .eigenvalues;
            let slow = exhaustive(&lengths, kind, count, fast[count - 1]);
            compared += count;
            let same = slow.len() == fast.len()
                && slow.iter().zip(&fast).all(|(a, b)| (a - b).abs() <= 1e-12 * b.abs().max(1.0));
            if !same {
                mismatches.push(i);
            }
        }
        Ok(Outcome {
            pass: mismatches.is_empty(),
            summary: format!(
                "20 instances ({compared} eigenvalues, box Neumann/Dirichlet and torus, n = 1..4): \
                 {} mismatches",
                mismatches.len()
            ),
            metrics: json!({"instances": 20, "mismatches": mismatches}),
            reports: Vec::new(),
        })
    }
}

/// Every lattice eigenvalue up to `limit`, sorted, truncated to `count`.
fn exhaustive(lengths: &[f64], kind: usize, count: usize, limit: f64) -> Vec<f64> {
    let cap = limit * (1.0 + 1e-9);
    // Box modes are π²Σ(m/L)², torus modes 4π²Σ(m/L)².
    let (scale, lo_sign) = match kind {
        0 => (PI * PI, 0i64),
        1 => (PI * PI, 1),
        _ => (4.0 * PI * PI, -1),
    };
    let bounds: Vec<i64> = lengths.iter().map(|l| (l * (cap / scale).sqrt()).floor() as i64 + 1).collect();
    let lo = |d: usize| match lo_sign {
        -1 => -bounds[d],
        s => s,
    };
    let mut out = Vec::new();
    let mut idx: Vec<i64> = (0..lengths.len()).map(lo).collect();
    loop {
        let v = scale * idx.iter().zip(lengths).map(|(&m, l)| (m as f64 / l).powi(2)).sum::<f64>();
        if v <= cap {
            out.push(v);
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                out.sort_by(f64::total_cmp);
                out.truncate(count);
                return out;
            }
            idx[d] += 1;
            if idx[d] <= bounds[d] {
                break;
            }
            idx[d] = lo(d);
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_matches_known_values() {
        let v = exhaustive(&[1.0, 1.0], 0, 5, 4.0 * PI * PI);
        let pi2 = PI * PI;
        let want = [0.0, pi2, pi2, 2.0 * pi2, 4.0 * pi2];
        assert!(v.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
        let t = exhaustive(&[1.0], 2, 3, 4.0 * pi2);
        assert_eq!(t.len(), 3);
        assert!((t[1] - 4.0 * pi2).abs() < 1e-12 && (t[2] - 4.0 * pi2).abs() < 1e-12);
        let d = exhaustive(&[1.0, 1.0], 1, 3, 5.0 * pi2);
        assert!((d[0] - 2.0 * pi2).abs() < 1e-12 && (d[2] - 5.0 * pi2).abs() < 1e-12);
    }

    #[test]
    fn quick_criteria() {
        let a = Acceptance::new(AcceptanceConfig::default());
        for id in [3, 8, 11, 12] {
            let r = a.run(id);
            assert!(r.pass, "{}", r.line());
        }
        assert!(!a.run(99).pass);
    }
}
