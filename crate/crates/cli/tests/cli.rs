use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn walsh_verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walsh-verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "lemma9"][..],
        &["--bogus", "verify", "all"],
        &["kernel", "fejer"],
        &["kernel", "dirichlet", "--n", "3", "--method", "spline"],
        &["experiment", "divergence", "--family", "primes"],
        &["experiment", "divergence", "--p", "-1"],
        &["lebesgue", "--n-max", "8"],
        &["--jobs", "0", "verify", "lemma4"],
    ] {
        let out = walsh_verify(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn oversized_resolution_exits_three() {
    let out = walsh_verify(&["verify", "lemma0", "--resolution", "30"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("k.csv");
    let out = walsh_verify(&["kernel", "fejer", "--n", "5", "--resolution", "3", "--out", path_arg(&target)]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn help_and_version_exit_zero() {
    assert!(walsh_verify(&["--help"]).status.success());
    let out = walsh_verify(&["--version"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("walsh-verify"));
}

#[test]
fn fejer_kernel_csv() {
    let out = walsh_verify(&["kernel", "fejer", "--n", "5", "--resolution", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,index,statistic,value");
    assert_eq!(lines.len(), 9);
    let total: f64 = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total / 8.0 - 1.0).abs() < 1e-12);
}

#[test]
fn dirichlet_routes_agree() {
    let outputs: Vec<String> = ["direct", "lemma1", "recursive"]
        .iter()
        .map(|m| stdout(&walsh_verify(&["kernel", "dirichlet", "--n", "11", "--resolution", "5", "--method", m])))
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn kernel_report_has_six_columns() {
    let out = walsh_verify(&["kernel", "report", "--n-max", "16", "--resolution", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,l1_norm,variation,lower_bound_ok,upper_bound_ok,max_ratio")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[3], "true");
        assert_eq!(fields[4], "true");
    }
}

#[test]
fn lebesgue_single_index() {
    let out = walsh_verify(&["lebesgue", "--n", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0,5,variation,4"));
    assert!(text.contains("lebesgue_cells"));
}

#[test]
fn empty_table_keeps_header() {
    let out = walsh_verify(&[
        "experiment",
        "divergence",
        "--resolution",
        "6",
        "--k-min",
        "6",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "k,index,statistic,value\n");
}

#[test]
fn json_round_trips_through_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("kernel.json");
    let out = walsh_verify(&[
        "--format",
        "json",
        "--out",
        path_arg(&json),
        "kernel",
        "report",
        "--n-max",
        "8",
        "--resolution",
        "5",
    ]);
    assert!(out.status.success());
    let again = walsh_verify(&["--format", "json", "report", path_arg(&json)]);
    assert!(again.status.success());
    assert_eq!(stdout(&again), fs::read_to_string(&json).unwrap());

    let csv = walsh_verify(&["--format", "csv", "report", path_arg(&json)]);
    let direct = walsh_verify(&["kernel", "report", "--n-max", "8", "--resolution", "5"]);
    assert_eq!(stdout(&csv), stdout(&direct));
}

#[test]
fn suite_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("suite.json");
    let out = walsh_verify(&["--format", "json", "--out", path_arg(&json), "verify", "lemma4", "--resolution", "8"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["kind"], "suites");
    assert_eq!(doc["metadata"]["seed"], 1729);
    let text = walsh_verify(&["report", path_arg(&json)]);
    assert!(text.status.success());
    assert!(stdout(&text).contains("PASS dyadic_fejer_closed_form"));
}

#[test]
fn malformed_report_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"records\": []}").unwrap();
    assert_eq!(walsh_verify(&["report", path_arg(&bad)]).status.code(), Some(2));
}

#[test]
fn config_document_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("params.json");
    fs::write(
        &config,
        r#"{"p": 0.5, "family": "pow2_plus1", "schedule": "thm411b", "resolution": 9}"#,
    )
    .unwrap();
    let from_config = walsh_verify(&["experiment", "divergence", "--config", path_arg(&config)]);
    let from_flags = walsh_verify(&[
        "experiment",
        "divergence",
        "--p",
        "0.5",
        "--family",
        "pow2_plus1",
        "--schedule",
        "thm411b",
        "--resolution",
        "9",
    ]);
    assert!(from_config.status.success());
    assert_eq!(stdout(&from_config), stdout(&from_flags));

    let overridden = walsh_verify(&["experiment", "divergence", "--config", path_arg(&config), "--resolution", "8"]);
    assert!(overridden.status.success());
    assert_ne!(stdout(&overridden), stdout(&from_config));

    fs::write(&config, r#"{"p": 0.5, "colour": "red"}"#).unwrap();
    let unknown = walsh_verify(&["experiment", "divergence", "--config", path_arg(&config)]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn experiments_are_deterministic() {
    let args = ["--seed", "7", "experiment", "upper-bound", "--resolution", "6", "--samples", "2"];
    let a = walsh_verify(&args);
    let b = walsh_verify(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = walsh_verify(&["--seed", "8", "experiment", "upper-bound", "--resolution", "6", "--samples", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn block_strong_table_increases() {
    let out = walsh_verify(&["experiment", "block-strong", "--m-max", "6"]);
    assert!(out.status.success());
    let values: Vec<f64> = stdout(&out)
        .lines()
        .skip(1)
        .filter(|l| l.contains(",statistic,"))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(values.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn parallel_suites_match_serial() {
    let serial = walsh_verify(&["--format", "csv", "verify", "all", "--resolution", "7"]);
    let parallel = walsh_verify(&["--jobs", "2", "--format", "csv", "verify", "all", "--resolution", "7"]);
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}
