use std::path::Path;
use std::process::Command;

use nsbl::cli::{RunManifest, EXIT_BREAKDOWN, EXIT_OK, EXIT_USAGE};

fn nsbl(args: &[&str], dir: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nsbl")).args(args).current_dir(dir).output().expect("spawn nsbl");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const SMALL: &str = r#"{
  "grid": {"n": 8, "L": 6.283185307179586},
  "dt": 0.01, "t_end": 0.05,
  "ic": {"kind": "random_divfree", "params": {"k0": 2}, "seed": 4},
  "cadence": 1, "snapshots": [0.05], "out_dir": "out"
}"#;

#[test]
fn simulate_writes_artifacts_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (code, _) = nsbl(&["simulate", &cfg], dir.path());
    assert_eq!(code, EXIT_OK);
    let out = dir.path().join("out");
    for f in ["diagnostics.csv", "certificates.json", "manifest.json", "u_t0.050000.nsf1"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let m = RunManifest::load(out.join("manifest.json")).unwrap();
    assert_eq!(m.command, "simulate");
    assert_eq!(m.exit_status, EXIT_OK);
    assert_eq!(m.seed, Some(4));
    assert!(m.finished >= m.started);
    assert_eq!(m.sim_config().unwrap().dt, 0.01);
    let leftovers: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    assert_eq!(nsbl(&["simulate", &cfg, "--out-dir", "a"], dir.path()).0, EXIT_OK);
    assert_eq!(nsbl(&["simulate", &cfg, "--out-dir", "b"], dir.path()).0, EXIT_OK);
    for f in ["diagnostics.csv", "certificates.json", "u_t0.050000.nsf1"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    for (threads, sub) in [("1", "one"), ("3", "three")] {
        let st = Command::new(env!("CARGO_BIN_EXE_nsbl"))
            .args(["simulate", &cfg, "--out-dir", sub])
            .env("NSBL_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(st.status.success());
    }
    let a = std::fs::read(dir.path().join("one/diagnostics.csv")).unwrap();
    let b = std::fs::read(dir.path().join("three/diagnostics.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn breakdown_exits_three_and_keeps_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"grid": {"n": 8, "L": 6.283185307179586}, "dt": 0.5, "t_end": 100.0, "dealias": false,
            "ic": {"kind": "random_divfree", "params": {"k0": 2, "urms": 100000}, "seed": 1},
            "cadence": 1, "out_dir": "out"}"#,
    );
    let (code, _) = nsbl(&["simulate", &cfg], dir.path());
    assert_eq!(code, EXIT_BREAKDOWN);
    let m = RunManifest::load(dir.path().join("out/manifest.json")).unwrap();
    assert_eq!(m.exit_status, EXIT_BREAKDOWN);
    let certs = std::fs::read_to_string(dir.path().join("out/certificates.json")).unwrap();
    assert!(certs.contains("breakdown"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(nsbl(&["verify", "nonsense"], p).0, EXIT_USAGE);
    assert_eq!(nsbl(&["gronwall", "--A", "1", "--B", "1"], p).0, EXIT_USAGE);
    assert_eq!(nsbl(&["gronwall", "--w0", "1", "--K", "1", "--alpha", "0.5"], p).0, EXIT_USAGE);
    assert_eq!(nsbl(&["verify-inequalities", "--count", "0"], p).0, EXIT_USAGE);
    let cfg = write_config(p, r#"{"grid": {"n": 8, "L": 1.0}, "dt": 0.01, "t_end": 0.1, "ic": {"kind": "vortex"}}"#);
    assert_eq!(nsbl(&["simulate", &cfg], p).0, EXIT_USAGE);
    assert_eq!(nsbl(&["--help"], p).0, EXIT_OK);
}

#[test]
fn gronwall_prints_bound_json() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = nsbl(&["gronwall", "--A", "1", "--B", "1", "--kappa", "0.5", "--T", "1", "--out-dir", "g"], dir.path());
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let k = v["k_t"].as_f64().unwrap();
    assert!((k - 2.0 * 8f64.exp()).abs() < 1e-9 * k);
    assert!(dir.path().join("g/manifest-gronwall.json").exists());
}

#[test]
fn verify_writes_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = nsbl(&["verify", "gronwall", "--out-dir", "r"], dir.path());
    assert_eq!(code, EXIT_OK, "{out}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r/verify-gronwall.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    let m = RunManifest::load(dir.path().join("r/manifest-verify-gronwall.json")).unwrap();
    assert_eq!(m.exit_status, EXIT_OK);
}

#[test]
fn inequality_csv_has_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = nsbl(&["verify-inequalities", "--count", "2", "--out", "ineq.csv"], dir.path());
    assert_eq!(code, EXIT_OK);
    let csv = std::fs::read_to_string(dir.path().join("ineq.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("id,q,r,n,lhs,rhs,ratio,pass"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().all(|r| r.split(',').count() == 8));
    assert!(rows.iter().any(|r| r.starts_with("gn_l3,") && r.ends_with(",true")));
    assert!(dir.path().join("manifest-verify-inequalities.json").exists());
}
