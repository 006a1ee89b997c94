//! `cspec`: spectra, nets, partitions, inequality checks and batch
//! experiments for convex domains.

mod output;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use convex_spectra::acceptance::{Acceptance, AcceptanceConfig};
use convex_spectra::analytic::{box_spectrum, disk_spectrum, torus_spectrum, BoxBc};
use convex_spectra::corpus::ExperimentConfig;
use convex_spectra::discretize::BoundarySpec;
use convex_spectra::eigsolve::{EigenOptions, DEFAULT_TOL};
use convex_spectra::experiment::{corpus_spectra, dm_experiment};
use convex_spectra::fem::{polygon_spectrum, FemOptions};
use convex_spectra::geom::{BoxDomain, ConvexPolygon, Point};
use convex_spectra::nets::{maximal_separated_net, voronoi_partition, NetDomain, PointSet};
use convex_spectra::spectrum::Spectrum;
use convex_spectra::verify::{self, BoundCertificate, CheckReport, MC_SEED};
use output::{write_csv, write_json, write_jsonl, write_table, Header};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Serialize)]
#[command(name = "cspec", version, about = "Spectral geometry of convex domains")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Laplacian eigenvalues of a polygon (FEM), box, torus or disk.
    Spectrum(SpectrumArgs),
    /// Greedy maximal r-separated net.
    Net(NetArgs),
    /// Voronoi partition of a polygon and its eigenvalue certificate.
    Partition(PartitionArgs),
    /// Run one inequality check and emit its report as JSON lines.
    Verify(Box<VerifyArgs>),
    /// Nested-pair corpus run, or the acceptance suite.
    Experiment(ExperimentArgs),
}

#[derive(Args, Serialize, Clone)]
struct DomainArgs {
    /// Polygon file: {"vertices": [[x, y], ...]}.
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Box side lengths, comma separated.
    #[arg(long = "box", value_delimiter = ',')]
    box_lengths: Option<Vec<f64>>,
    /// Flat torus side lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    torus: Option<Vec<f64>>,
    /// Disk radius.
    #[arg(long)]
    disk: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Bc {
    Neumann,
    Dirichlet,
    Mixed,
}

#[derive(Args, Serialize)]
struct FemArgs {
    /// Target mesh edge length.
    #[arg(long, default_value_t = 0.02)]
    h: f64,
    /// Relative residual tolerance of the eigensolver.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Skip the refined solve (no uncertainty estimate).
    #[arg(long)]
    no_refine: bool,
}

impl FemArgs {
    fn options(&self) -> FemOptions {
        let mut o = if self.no_refine { FemOptions::single(self.h) } else { FemOptions::new(self.h) };
        o.eigen = EigenOptions {
            tol: self.tol,
            ..EigenOptions::default()
        };
        o
    }
}

#[derive(Args, Serialize)]
struct SpectrumArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, value_enum, default_value = "neumann")]
    bc: Bc,
    /// Edges with Neumann conditions for `--bc mixed`; edge i joins vertex i and i+1.
    #[arg(long, value_delimiter = ',')]
    neumann_edges: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[command(flatten)]
    fem: FemArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct NetArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long)]
    r: f64,
    /// Probe grid spacing, at most r/10 (default r/16).
    #[arg(long)]
    probe_step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PartitionArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Site file in net format {"r": ..., "points": [[x, y], ...]}.
    #[arg(long, conflicts_with = "r")]
    sites: Option<PathBuf>,
    /// Build the sites as a greedy r-net instead.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    probe_step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CheckName {
    Polya,
    ClosedManifold,
    DirichletMonotonicity,
    DmRatio,
    ReplayDmProof,
    Certificate,
    Keylemma,
    BoundaryConcentration,
    MixedConcentration,
    BishopGromov,
    BrunnMinkowski,
    ChengBall,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckName,
    #[command(flatten)]
    domain: DomainArgs,
    /// Inner polygon of a nested pair.
    #[arg(long)]
    inner: Option<PathBuf>,
    /// Outer polygon of a nested pair.
    #[arg(long)]
    outer: Option<PathBuf>,
    /// Second polygon for Brunn–Minkowski.
    #[arg(long)]
    other: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    kmax: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Outer radius for Bishop–Gromov.
    #[arg(long = "big-r")]
    big_r: Option<f64>,
    /// Center point "x,y".
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
    #[arg(long)]
    t: Option<f64>,
    /// Dimension for the Cheng ball check.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    sites: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    neumann_edges: Vec<usize>,
    #[arg(long)]
    probe_step: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = MC_SEED)]
    seed: u64,
    #[command(flatten)]
    fem: FemArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExperimentArgs {
    /// Run the full acceptance suite instead of a corpus experiment.
    #[arg(long)]
    acceptance: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    pairs: usize,
    #[arg(long, default_value_t = 10)]
    kmax: usize,
    #[arg(long, default_value_t = 0.04)]
    h: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

/// Misuse of the command line, reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    match v {
        Some(v) => Ok(v),
        None => usage(format!("{flag} is required for this command")),
    }
}

fn read_polygon(path: &Path) -> Result<ConvexPolygon> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing polygon {}", path.display()))
}

fn read_sites(path: &Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing sites {}", path.display()))
}

enum Domain {
    Polygon(ConvexPolygon),
    Box(BoxDomain),
    Torus(Vec<f64>),
    Disk(f64),
}

impl DomainArgs {
    fn resolve(&self) -> Result<Domain> {
        let given = [
            self.domain.is_some(),
            self.box_lengths.is_some(),
            self.torus.is_some(),
            self.disk.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return usage("give exactly one of --domain, --box, --torus, --disk");
        }
        Ok(if let Some(p) = &self.domain {
            Domain::Polygon(read_polygon(p)?)
        } else if let Some(l) = &self.box_lengths {
            Domain::Box(BoxDomain::new(l.clone())?)
        } else if let Some(l) = &self.torus {
            Domain::Torus(l.clone())
        } else {
            Domain::Disk(self.disk.unwrap_or_default())
        })
    }

    fn polygon(&self) -> Result<ConvexPolygon> {
        match self.resolve()? {
            Domain::Polygon(p) => Ok(p),
            _ => usage("this command needs a polygon (--domain)"),
        }
    }
}

fn boundary_spec(p: &ConvexPolygon, bc: Bc, edges: &[usize]) -> Result<BoundarySpec> {
    Ok(match bc {
        Bc::Neumann => BoundarySpec::AllNeumann,
        Bc::Dirichlet => BoundarySpec::AllDirichlet,
        Bc::Mixed if edges.is_empty() => return usage("--bc mixed needs --neumann-edges"),
        Bc::Mixed => BoundarySpec::neumann_edges(p, edges)?,
    })
}

fn box_bc(bc: Bc) -> Result<BoxBc> {
    match bc {
        Bc::Neumann => Ok(BoxBc::Neumann),
        Bc::Dirichlet => Ok(BoxBc::Dirichlet),
        Bc::Mixed => usage("mixed conditions are only available on polygons"),
    }
}

fn spectrum(cli: &Cli, a: &SpectrumArgs) -> Result<bool> {
    let s = match a.domain.resolve()? {
        Domain::Polygon(p) => polygon_spectrum(&p, &boundary_spec(&p, a.bc, &a.neumann_edges)?, a.count, &a.fem.options())?,
        Domain::Box(b) => box_spectrum(&b, box_bc(a.bc)?, a.count)?,
        Domain::Torus(l) => torus_spectrum(&l, a.count)?,
        Domain::Disk(r) => disk_spectrum(r, box_bc(a.bc)?, a.count)?,
    };
    write_json(a.out.as_deref(), &Header::new("spectrum", cli), &s)?;
    Ok(true)
}

fn net(cli: &Cli, a: &NetArgs) -> Result<bool> {
    let step = a.probe_step.unwrap_or(a.r / 16.0);
    let set = match a.domain.resolve()? {
        Domain::Polygon(p) => maximal_separated_net(NetDomain::Polygon(&p), a.r, step)?,
        Domain::Box(b) => maximal_separated_net(NetDomain::Box(&b), a.r, step)?,
        _ => return usage("nets are built in polygons (--domain) or boxes (--box)"),
    };
    write_json(a.out.as_deref(), &Header::new("net", cli), &set)?;
    Ok(true)
}

#[derive(Serialize)]
struct PartitionOutput {
    partition: convex_spectra::nets::Partition,
    certificate: BoundCertificate,
}

fn partition(cli: &Cli, a: &PartitionArgs) -> Result<bool> {
    let p = a.domain.polygon()?;
    let sites = match (&a.sites, a.r) {
        (Some(path), _) => read_sites(path)?,
        (None, Some(r)) => maximal_separated_net(NetDomain::Polygon(&p), r, a.probe_step.unwrap_or(r / 16.0))?,
        (None, None) => return usage("give --sites or --r"),
    };
    let partition = voronoi_partition(&p, &sites)?;
    let certificate = BoundCertificate::from_partition(&p, &partition);
    write_json(
        a.out.as_deref(),
        &Header::new("partition", cli),
        &PartitionOutput { partition, certificate },
    )?;
    Ok(true)
}

fn pair(a: &VerifyArgs) -> Result<(ConvexPolygon, ConvexPolygon)> {
    match (&a.inner, &a.outer) {
        (Some(i), Some(o)) => Ok((read_polygon(i)?, read_polygon(o)?)),
        _ => usage("this check needs --inner and --outer"),
    }
}

fn neumann_spectrum_of(domain: Domain, count: usize, fem: &FemArgs) -> Result<(Spectrum, usize, f64)> {
    Ok(match domain {
        Domain::Polygon(p) => (
            polygon_spectrum(&p, &BoundarySpec::AllNeumann, count, &fem.options())?,
            2,
            p.area(),
        ),
        Domain::Box(b) => (box_spectrum(&b, BoxBc::Neumann, count)?, b.dim(), b.volume()),
        Domain::Torus(l) => {
            let vol = l.iter().product();
            (torus_spectrum(&l, count)?, l.len(), vol)
        }
        Domain::Disk(r) => (disk_spectrum(r, BoxBc::Neumann, count)?, 2, std::f64::consts::PI * r * r),
    })
}

fn run_check(a: &VerifyArgs) -> Result<Vec<CheckReport>> {
    let h = a.fem.h;
    Ok(match a.check {
        CheckName::Polya => {
            let (s, n, vol) = neumann_spectrum_of(a.domain.resolve()?, a.kmax + 1, &a.fem)?;
            verify::polya_check(&s, n, vol, a.kmax)?.to_vec()
        }
        CheckName::ClosedManifold => match a.domain.resolve()? {
            Domain::Torus(l) => vec![verify::closed_manifold_check(&l, a.kmax)?],
            _ => return usage("closed-manifold needs --torus"),
        },
        CheckName::DirichletMonotonicity => {
            let (i, o) = pair(a)?;
            vec![verify::dirichlet_monotonicity_check(&i, &o, a.kmax, h)?]
        }
        CheckName::DmRatio => {
            let (i, o) = pair(a)?;
            vec![verify::dm_ratio(&i, &o, a.kmax, h)?]
        }
        CheckName::ReplayDmProof => {
            let (i, o) = pair(a)?;
            vec![verify::replay_dm_proof(&i, &o, need(a.k, "--k")?, need(a.c, "--c")?, h)?.report]
        }
        CheckName::Certificate => {
            let p = a.domain.polygon()?;
            let sites = read_sites(a.sites.as_deref().map_or_else(|| usage("--sites is required"), Ok)?)?;
            let partition = voronoi_partition(&p, &sites)?;
            let s = polygon_spectrum(&p, &BoundarySpec::AllNeumann, partition.cells.len() + 1, &a.fem.options())?;
            vec![verify::certified_neumann_lower_bound(&p, &partition, &s)?.1]
        }
        CheckName::Keylemma => {
            let r = need(a.r, "--r")?;
            let step = a.probe_step.unwrap_or(r / 16.0);
            match a.domain.resolve()? {
                Domain::Polygon(p) => vec![verify::keylemma_constant(&p, r, step, h)?],
                Domain::Box(b) => vec![verify::keylemma_constant_box(&b, r, step)?],
                _ => return usage("keylemma needs --domain or --box"),
            }
        }
        CheckName::BoundaryConcentration => {
            vec![verify::boundary_concentration_check(&a.domain.polygon()?, need(a.r, "--r")?, h)?]
        }
        CheckName::MixedConcentration => {
            let p = a.domain.polygon()?;
            let spec = boundary_spec(&p, Bc::Mixed, &a.neumann_edges)?;
            vec![verify::mixed_concentration_check(&p, &spec, need(a.r, "--r")?, h, a.samples, a.seed)?]
        }
        CheckName::BishopGromov => {
            let x = match a.x.as_deref() {
                Some([x, y]) => Point::new(*x, *y),
                _ => return usage("--x needs two coordinates \"x,y\""),
            };
            vec![verify::bishop_gromov_check(&a.domain.polygon()?, x, need(a.r, "--r")?, need(a.big_r, "--big-r")?)?]
        }
        CheckName::BrunnMinkowski => {
            let b = read_polygon(a.other.as_deref().map_or_else(|| usage("--other is required"), Ok)?)?;
            vec![verify::brunn_minkowski_check(&a.domain.polygon()?, &b, need(a.t, "--t")?)?]
        }
        CheckName::ChengBall => {
            vec![verify::cheng_ball_check(need(a.n, "--n")?, need(a.r, "--r")?, (!a.fem.no_refine).then_some(h))?]
        }
    })
}

fn hard_ok(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass || !r.hard)
}

fn verify_cmd(cli: &Cli, a: &VerifyArgs) -> Result<bool> {
    let reports = run_check(a)?;
    write_jsonl(a.out.as_deref(), &Header::new("verify", cli), &reports)?;
    Ok(hard_ok(&reports))
}

#[derive(Serialize)]
struct RatioRow {
    pair: u64,
    k: usize,
    ratio: f64,
}

#[derive(Serialize)]
struct ExperimentSummary {
    pairs: usize,
    kmax: usize,
    max_ratio: f64,
    smallest_sufficient_c: f64,
    hard_failures: usize,
}

fn experiment(cli: &Cli, a: &ExperimentArgs) -> Result<bool> {
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let header = Header::new("experiment", cli);
    if a.acceptance {
        let suite = Acceptance::new(AcceptanceConfig {
            seed: a.seed,
            pairs: a.pairs,
            kmax: a.kmax,
            corpus_h: a.h,
            ..AcceptanceConfig::default()
        });
        let mut results = Vec::new();
        for id in 1..=convex_spectra::acceptance::CRITERIA {
            let r = suite.run(id);
            println!("{}", r.line());
            results.push(r);
        }
        let reports: Vec<CheckReport> = results.iter().flat_map(|r| r.reports.iter().cloned()).collect();
        write_jsonl(Some(&a.out.join("acceptance_reports.jsonl")), &header, &reports)?;
        let summary: Vec<_> = results
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.reports.clear();
                r
            })
            .collect();
        write_json(Some(&a.out.join("acceptance.json")), &header, &summary)?;
        return Ok(results.iter().all(|r| r.pass));
    }
    let cfg = ExperimentConfig {
        seed: a.seed,
        corpus_size: a.pairs,
        kmax: a.kmax,
        h: a.h,
        out_dir: a.out.clone(),
        ..ExperimentConfig::default()
    };
    cfg.validate().map_err(|e| Usage(e.to_string()))?;
    let pairs = corpus_spectra(&cfg)?;
    let dm = dm_experiment(&pairs, cfg.kmax)?;
    let rows: Vec<RatioRow> = dm
        .ratios
        .iter()
        .zip(&pairs)
        .flat_map(|(r, p)| {
            r.rows.iter().map(move |row| RatioRow {
                pair: p.seed,
                k: row.k.unwrap_or(0),
                ratio: row.value.unwrap_or(f64::NAN),
            })
        })
        .collect();
    write_csv(&a.out.join("dm_ratio.csv"), &header, &rows)?;
    write_table(
        &a.out.join("dm_ratio.dat"),
        &header,
        &["pair", "k", "ratio"],
        rows.iter().map(|r| vec![r.pair.to_string(), r.k.to_string(), format!("{:.12e}", r.ratio)]),
    )?;
    let mut reports = dm.monotonicity.clone();
    reports.extend(dm.ratios.iter().cloned());
    reports.extend(dm.replays.iter().cloned());
    write_jsonl(Some(&a.out.join("reports.jsonl")), &header, &reports)?;
    verify::write_csv_summary(&reports, std::fs::File::create(a.out.join("summary.csv"))?)?;
    let summary = ExperimentSummary {
        pairs: pairs.len(),
        kmax: cfg.kmax,
        max_ratio: dm.max_ratio,
        smallest_sufficient_c: dm.sufficient_c,
        hard_failures: dm.hard_failures(),
    };
    write_json(Some(&a.out.join("summary.json")), &header, &summary)?;
    println!(
        "{} pairs, k ≤ {}: max ratio {:.6}, smallest sufficient c {:.6}, {} hard failures",
        summary.pairs, summary.kmax, summary.max_ratio, summary.smallest_sufficient_c, summary.hard_failures
    );
    Ok(summary.hard_failures == 0)
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return usage("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    match &cli.command {
        Command::Spectrum(a) => spectrum(cli, a),
        Command::Net(a) => net(cli, a),
        Command::Partition(a) => partition(cli, a),
        Command::Verify(a) => verify_cmd(cli, a),
        Command::Experiment(a) => experiment(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("cspec: hard checks failed");
            ExitCode::from(1)
        }
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("cspec: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("cspec: {e:#}");
            ExitCode::from(1)
        }
    }
}
