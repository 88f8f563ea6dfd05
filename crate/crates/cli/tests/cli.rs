use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EUCLIDEAN: &str = r#"{"family":"euclidean"}"#;
const DISK: &str = r#"{"kind":"disk","r":1}"#;
const ELLIPTIC: &str = r#"{"family":"elliptic","a":2,"b":1}"#;
const POLAR_LEVEL: &str = r#"{"kind":"norm_level","mode":"polar","level":1}"#;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anisoperim"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn xy_rows(path: &Path) -> Vec<(f64, f64)> {
    csv_rows(path)
        .iter()
        .map(|r| (r[1].parse().unwrap(), r[2].parse().unwrap()))
        .collect()
}

#[test]
fn constant_on_the_disk() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["constant", "--norm", EUCLIDEAN, "--domain", DISK], dir.path());
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("c_h = 2.546479"), "{}", stdout(&o));
    let doc = read_json(&dir.path().join("constant.json"));
    let c = doc["c_h"].as_f64().unwrap();
    assert!((c - 8.0 / std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(doc["provenance"]["norm"]["family"], "euclidean");
    assert_eq!(doc["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(!doc["minimizers"].as_array().unwrap().is_empty());
}

#[test]
fn constant_for_the_elliptic_polar_ball() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["constant", "--norm", ELLIPTIC, "--domain", POLAR_LEVEL], dir.path());
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("c_h = 1.273239"), "{}", stdout(&o));
}

#[test]
fn search_method_agrees_with_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["constant", "--norm", ELLIPTIC, "--domain", POLAR_LEVEL, "--method", "search"], &dir.path().join("a"));
    assert!(a.status.success(), "{a:?}");
    let c = read_json(&dir.path().join("a/constant.json"))["c_h"].as_f64().unwrap();
    assert!((c - 4.0 / std::f64::consts::PI).abs() < 1e-6 * c);
}

#[test]
fn malformed_json_is_a_spec_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let o = run(&["constant", "--norm", r#"{"family": "#, "--domain", DISK], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = run(&["constant", "--norm", EUCLIDEAN, "--domain", r#"{"kind":"disk","r":-1}"#], &out);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["constant", "--norm", EUCLIDEAN, "--domain", DISK, "--tol", "nonsense=1"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn specs_load_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let norm = dir.path().join("norm.json");
    let domain = dir.path().join("domain.json");
    std::fs::write(&norm, EUCLIDEAN).unwrap();
    std::fs::write(&domain, DISK).unwrap();
    let o = run(
        &["constant", "--norm", norm.to_str().unwrap(), "--domain", domain.to_str().unwrap()],
        &dir.path().join("out"),
    );
    assert!(o.status.success(), "{o:?}");
}

#[test]
fn wulff_csv_traces_the_unit_circle() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["wulff", "--norm", EUCLIDEAN], dir.path());
    assert!(o.status.success(), "{o:?}");
    let rows = xy_rows(&dir.path().join("wulff.csv"));
    assert!(rows.len() > 100);
    let worst = rows.iter().map(|(x, y)| (x.hypot(*y) - 1.0).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
    assert!(std::fs::read_to_string(dir.path().join("wulff.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn wulff_csv_for_the_elliptic_norm() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["wulff", "--norm", ELLIPTIC, "--domain", POLAR_LEVEL], dir.path());
    assert!(o.status.success(), "{o:?}");
    for (x, y) in xy_rows(&dir.path().join("wulff.csv")) {
        assert!((4.0 * x * x + y * y - 1.0).abs() < 1e-9, "({x}, {y})");
    }
}

#[test]
fn wulff_csv_for_the_four_norm() {
    // Hölder: the dual of the 4-norm is the 4/3-norm.
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["wulff", "--norm", r#"{"family":"p_norm","p":4}"#], dir.path());
    assert!(o.status.success(), "{o:?}");
    let q = 4.0 / 3.0;
    for (x, y) in xy_rows(&dir.path().join("wulff.csv")) {
        let polar = (x.abs().powf(q) + y.abs().powf(q)).powf(1.0 / q);
        assert!((polar - 1.0).abs() < 1e-9, "({x}, {y}) -> {polar}");
    }
}

#[test]
fn wulff_needs_a_smooth_norm() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["wulff", "--norm", r#"{"family":"max"}"#], &dir.path().join("x"));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["wulff", "--norm", r#"{"family":"max_approx","p_sequence":[8,16]}"#], &dir.path().join("y"));
    assert!(o.status.success(), "{o:?}");
}

#[test]
fn profile_is_non_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["profile", "--norm", EUCLIDEAN, "--domain", DISK], dir.path());
    assert!(o.status.success(), "{o:?}");
    let rows = csv_rows(&dir.path().join("profile.csv"));
    assert_eq!(rows.len(), 16);
    let mu: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    for w in mu.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "{mu:?}");
    }
}

#[test]
fn profile_takes_a_k_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["profile", "--norm", EUCLIDEAN, "--domain", DISK, "--k-grid", "0.5:1.5:3"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let k: Vec<f64> = csv_rows(&dir.path().join("profile.csv")).iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(k, vec![0.5, 1.0, 1.5]);
    let o = run(&["profile", "--norm", EUCLIDEAN, "--domain", DISK, "--k-grid", "0.5:3:2"], &dir.path().join("bad"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_auto_passes_on_the_disk() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["verify", "--norm", EUCLIDEAN, "--domain", DISK, "--c", "auto", "--samples", "10000", "--seed", "7"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let doc = read_json(&dir.path().join("verify.json"));
    assert_eq!(doc["violations"], 0);
    assert_eq!(doc["samples"], 10000);
    assert_eq!(doc["passed"], true);
}

#[test]
fn verify_flags_a_constant_above_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--norm", EUCLIDEAN, "--domain", DISK, "--c", "3.0"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let doc = read_json(&dir.path().join("verify.json"));
    assert!(doc["violations"].as_u64().unwrap() > 0);
    assert_eq!(doc["passed"], false);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let domain = r#"{"kind":"polygon","vertices":[[0,0],[2,0],[2.5,1],[0.5,1.5]]}"#;
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        assert!(run(&["constant", "--norm", ELLIPTIC, "--domain", domain, "--samples", "500", "--seed", "3"], &out)
            .status
            .success());
        assert!(run(&["profile", "--norm", ELLIPTIC, "--domain", domain, "--k-grid", "0.2:1.0:4"], &out)
            .status
            .success());
        assert!(run(&["verify", "--norm", ELLIPTIC, "--domain", domain, "--samples", "2000", "--seed", "3"], &out)
            .status
            .success());
    }
    for file in ["constant.json", "profile.csv", "verify.json"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn emitted_constant_round_trips_into_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (norm, domain) in [
        (EUCLIDEAN, DISK),
        (ELLIPTIC, r#"{"kind":"norm_level","mode":"sublevel","level":1}"#),
        (r#"{"family":"p_norm","p":4}"#, r#"{"kind":"polygon","vertices":[[0,0],[1,0],[0.2,0.8]]}"#),
    ] {
        let out = dir.path().join("run");
        assert!(run(&["constant", "--norm", norm, "--domain", domain], &out).status.success());
        let text = std::fs::read_to_string(out.join("constant.json")).unwrap();
        let doc: Value = serde_json::from_str(&text).unwrap();
        let c = doc["c_h"].as_f64().unwrap();
        let o = run(
            &["verify", "--norm", norm, "--domain", domain, "--c", &format!("{c:e}"), "--seed", "11"],
            &out,
        );
        assert_eq!(o.status.code(), Some(0), "{norm} {domain}: {}", stdout(&o));
        assert_eq!(read_json(&out.join("verify.json"))["c"].as_f64().unwrap().to_bits(), c.to_bits());
    }
}

#[test]
fn plot_draws_cuts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["plot", "--norm", ELLIPTIC, "--domain", r#"{"kind":"ellipse","a":2,"b":1}"#], dir.path());
    assert!(o.status.success(), "{o:?}");
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.matches("<path").count() >= 3);
}

#[test]
fn missing_domain_is_a_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["constant", "--norm", EUCLIDEAN], &dir.path().join("x"));
    assert_eq!(o.status.code(), Some(2));
}
