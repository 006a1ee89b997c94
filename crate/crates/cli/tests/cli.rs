use std::path::{Path, PathBuf};
use std::process::Command;

fn cspec(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cspec")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_square(dir: &Path) -> PathBuf {
    let p = dir.join("square.json");
    std::fs::write(&p, r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
    p
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn spectrum_of_the_square() {
    let dir = scratch("spectrum");
    let sq = write_square(&dir);
    let out = dir.join("spec.json");
    let o = cspec(&[
        "spectrum", "--domain", sq.to_str().unwrap(), "--bc", "neumann", "--h", "0.05", "--count", "4",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert_eq!(v["tool"], "cspec");
    assert_eq!(v["config"]["command"]["spectrum"]["count"], 4);
    let lambda1 = v["result"]["eigenvalues"][1].as_f64().unwrap();
    assert!((lambda1 - std::f64::consts::PI.powi(2)).abs() < 0.05);
    assert_eq!(v["result"]["index_base"], 0);
}

#[test]
fn torus_polya_sweep_exits_cleanly() {
    let o = cspec(&["verify", "--check", "polya", "--torus", "1,1", "--kmax", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1]["check"], "polya");
    assert_eq!(lines[2]["check"], "kroger");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cspec(&["spectrum", "--bogus"]).status.code(), Some(2));
    assert_eq!(cspec(&["spectrum", "--box", "1,1", "--torus", "1"]).status.code(), Some(2));
    assert_eq!(cspec(&["verify", "--check", "bishop-gromov", "--box", "1,1"]).status.code(), Some(2));
}

#[test]
fn bishop_gromov_at_a_corner() {
    let dir = scratch("bgi");
    let sq = write_square(&dir);
    let o = cspec(&[
        "verify", "--check", "bishop-gromov", "--domain", sq.to_str().unwrap(), "--x", "0,0", "--r", "0.5",
        "--big-r", "1",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let report: serde_json::Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn net_and_partition() {
    let dir = scratch("net");
    let sq = write_square(&dir);
    let net = dir.join("net.json");
    assert!(cspec(&["net", "--domain", sq.to_str().unwrap(), "--r", "0.5", "--out", net.to_str().unwrap()])
        .status
        .success());
    let points = json(&net)["result"]["points"].as_array().unwrap().len();
    assert!((4..=9).contains(&points));
    let part = dir.join("part.json");
    let o = cspec(&["partition", "--domain", sq.to_str().unwrap(), "--r", "0.5", "--out", part.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&part);
    assert_eq!(v["result"]["certificate"]["target_index"].as_u64().unwrap() as usize, points);
}

#[test]
fn experiment_outputs_are_reproducible() {
    let run = |name: &str| {
        let dir = scratch(name);
        let o = cspec(&[
            "experiment", "--seed", "7", "--pairs", "2", "--kmax", "2", "--h", "0.1", "--out", dir.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        dir
    };
    let (a, b) = (run("exp_a"), run("exp_b"));
    for f in ["dm_ratio.csv", "dm_ratio.dat", "reports.jsonl", "summary.csv"] {
        let (x, y) = (std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
        let strip = |s: &[u8]| String::from_utf8_lossy(s).replace("exp_a", "").replace("exp_b", "");
        assert_eq!(strip(&x), strip(&y), "{f}");
    }
    let summary = json(&a.join("summary.json"));
    assert_eq!(summary["version"], env!("CARGO_PKG_VERSION"));
    assert!(summary["result"]["max_ratio"].as_f64().unwrap() > 0.0);
    let csv = std::fs::read_to_string(a.join("dm_ratio.csv")).unwrap();
    assert!(csv.starts_with("# {"));
    assert_eq!(csv.lines().count(), 2 + 4);
}
