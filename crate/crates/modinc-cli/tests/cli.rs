//! End-to-end behavior of the `modinc` binary: exit codes, output
//! determinism, and document round trips.

use modinc_cli::scenario::SolveReport;
use std::process::{Command, Output};

fn modinc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modinc"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn solve_writes_summary_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let json = dir.path().join("summary.json");
    let out = modinc(&[
        "solve",
        "--scenario",
        "warmup",
        "--incentive",
        "trivial",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        json.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: SolveReport =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.t_f, 2.0);
    assert_eq!(report.scenario, "warmup");
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with("t,x,v,a,lambda,lambda_dot,u,cost_density,conserved_residual\n"));
    assert_eq!(body.lines().count(), 1002);
}

#[test]
fn trajectory_csv_is_bitwise_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = modinc(&[
            "solve",
            "--scenario",
            "spook",
            "--incentive",
            "elliptical",
            "--mu",
            "0.5",
            "--c",
            "1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn summary_json_round_trips() {
    let out = modinc(&[
        "solve",
        "--scenario",
        "qcc-spook",
        "--incentive",
        "quadratic",
        "--c",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed: SolveReport = serde_json::from_str(&text).unwrap();
    let mut reserialized = serde_json::to_string_pretty(&parsed).unwrap();
    reserialized.push('\n');
    assert_eq!(text, reserialized);
    assert!(parsed.t_star.is_some());
}

#[test]
fn degenerate_request_exits_three_with_error_json() {
    let out = modinc(&[
        "solve",
        "--scenario",
        "warmup",
        "--incentive",
        "elliptical",
        "--mu",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["error"]["code"], "DEGENERATE");
}

#[test]
fn domain_error_exits_three() {
    let out = modinc(&["solve", "--scenario", "qcc-hat", "--c", "2.0"]);
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc["error"]["code"], "DOMAIN");
}

#[test]
fn usage_error_exits_two() {
    let out = modinc(&["solve", "--scenario", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_emits_grid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = modinc(&[
        "sweep",
        "--scenario",
        "qcc-spook",
        "--incentive",
        "quadratic",
        "--sweep-c",
        "0.2,1,5",
        "--samples",
        "101",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 4);
    assert!(body.starts_with("scenario,incentive,mu,c,k,"));
}

#[test]
fn compare_rescaled_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cmp.csv");
    let out = modinc(&[
        "compare-rescaled",
        "--c",
        "0.5",
        "--samples",
        "101",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("s,d_xdd_mu1_vs_qcc,"));
    assert_eq!(body.lines().count(), 102);
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let ok = modinc(&["verify"]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "verify output:\n{}",
        String::from_utf8_lossy(&ok.stdout)
    );
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));

    let bad = modinc(&["verify", "--perturb-q0", "1e-3"]);
    assert_eq!(bad.status.code(), Some(4));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL"));
}
