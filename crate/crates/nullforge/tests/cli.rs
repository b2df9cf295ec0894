//! End-to-end checks of the command-line surface: exit codes, determinism,
//! file round-trips, fixture verification, config-file invocation, and the
//! sweep fan-out.

use std::path::PathBuf;

use nullforge::cli::run_with_io;
use nullforge::io::{read_matrix, write_matrix};
use nullforge::matrix::DenseMatrix;

fn run(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with_io(&args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixtures_dir() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .display()
        .to_string()
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let args = [
        "spectrum", "--model", "kk_bidiagonal", "--n", "12", "--params", "Mf=1,g=1,gp=1",
        "--analytic", "--numeric", "--gaps", "--kmax", "5",
    ];
    let (c1, o1, _) = run(&args);
    let (c2, o2, _) = run(&args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(o1, o2);

    let csv_args = [
        "nullmodes", "--model", "uniform_cw", "--n", "15", "--gf", "q^(i-j)", "--mode",
        "multiply", "--params", "q=2", "--format", "csv",
    ];
    let (c1, o1, _) = run(&csv_args);
    let (c2, o2, _) = run(&csv_args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    assert!(o1.starts_with("site,amplitude\n"));
    assert_eq!(o1.lines().count(), 17);
}

#[test]
fn exit_codes() {
    // Usage error: unknown flag.
    let (code, _, err) = run(&["nullmodes", "--bogus"]);
    assert_eq!(code, 2, "{err}");

    // Usage error: no command.
    let (code, _, _) = run(&[]);
    assert_eq!(code, 2);

    // Domain error: prediction demands a separable transform.
    let (code, _, err) = run(&[
        "nullmodes", "--model", "uniform_cw", "--n", "4", "--gf", "f+i-j", "--mode", "multiply",
        "--params", "f=7.5", "--predict",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("separable"), "{err}");

    // Domain error: missing file.
    let (code, _, _) = run(&["transform", "--in", "/nonexistent.json", "--gf", "c", "--params", "c=1", "--mode", "divide"]);
    assert_eq!(code, 1);

    // Help goes to stdout with exit 0.
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check-separable"));
}

#[test]
fn verify_passes_on_shipped_fixtures() {
    let (code, out, err) = run(&["verify", "--fixtures", &fixtures_dir()]);
    assert_eq!(code, 0, "stderr: {err}");
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["failed"], 0);
    assert!(summary["fixtures"].as_u64().unwrap() >= 12);
}

#[test]
fn verify_fails_on_a_wrong_expectation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = serde_json::json!({
        "name": "wrong-rank",
        "provenance": "trivial",
        "input": {"matrix": {"rows": 2, "cols": 2, "domain": "rational",
                             "entries": [["1", "0"], ["0", "1"]]}},
        "expected": {"rank": 1},
    });
    std::fs::write(dir.path().join("bad.json"), bad.to_string()).unwrap();
    let (code, out, _) = run(&["verify", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["failed"], 1);
}

#[test]
fn transform_writes_readable_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.json");
    let output = dir.path().join("b.json");
    let a = DenseMatrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![3, 6, 9]]);
    write_matrix(&a, &input).unwrap();

    let (code, out, err) = run(&[
        "transform", "--in", input.to_str().unwrap(), "--gf", "f^(i-j)", "--params", "f=2",
        "--mode", "multiply", "--out", output.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["theorem1"]["preserved"], true);
    assert_eq!(summary["theorem1"]["separable"], true);

    let b = read_matrix(&output).unwrap();
    let g = nullforge::TransformFn::parse("f^(i-j)", &[("f", 2.0)]).unwrap();
    let want = nullforge::transform::apply_transform(&a, &g, nullforge::Mode::Multiply).unwrap();
    assert_eq!(b, want);

    // Without --out the matrix is inlined in the summary.
    let (code, out, _) = run(&[
        "transform", "--in", input.to_str().unwrap(), "--gf", "f^(i-j)", "--params", "f=2",
        "--mode", "multiply",
    ]);
    assert_eq!(code, 0);
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["matrix"]["entries"][0][2], "3/4");
}

#[test]
fn nullmodes_predicts_and_reports_match() {
    let (code, out, _) = run(&[
        "nullmodes", "--model", "uniform_cw", "--n", "6", "--gf", "q^(i-j)", "--mode", "divide",
        "--params", "q=2", "--predict",
    ]);
    assert_eq!(code, 0);
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["nullity"], 1);
    assert_eq!(summary["predicted_matches_computed"], true);
    // Geometric mode localized at the first site under divide.
    assert_eq!(summary["localization"]["peak_site"], 1);
}

#[test]
fn config_file_replaces_argv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        serde_json::json!({
            "command": "check-separable",
            "gf": "q^(i-j)",
            "n": 4,
            "m": 4,
            "params": "q=2",
        })
        .to_string(),
    )
    .unwrap();
    let (code, out, err) = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "stderr: {err}");
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["separable"], true);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let args = [
        "sweep", "--model", "uniform_cw", "--n", "10", "--gf", "q^(i-j)", "--mode", "divide",
        "--param", "q=1.25:3:8", "--metric", "suppression", "--format", "csv",
    ];
    std::env::set_var("NULLFORGE_THREADS", "1");
    let (c1, serial, _) = run(&args);
    std::env::set_var("NULLFORGE_THREADS", "4");
    let (c2, parallel, _) = run(&args);
    std::env::remove_var("NULLFORGE_THREADS");
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(serial, parallel);
    assert!(serial.starts_with("q,suppression\n"));
    assert_eq!(serial.lines().count(), 9);
    // Suppression of the geometric mode at q is q^-n: decreasing in q.
    let rows: Vec<f64> = serial
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    for w in rows.windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn spectrum_csv_output() {
    let (code, out, _) = run(&[
        "spectrum", "--model", "kk_bidiagonal", "--n", "8", "--numeric", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("k,value,gap\n"));
    assert_eq!(out.lines().count(), 9);
}
