use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn relhur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relhur"))
        .args(args)
        .env_remove("REL_HUR_THREADS")
        .output()
        .unwrap()
}

fn relhur_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relhur"))
        .args(args)
        .env("REL_HUR_THREADS", threads)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn significant_digits(field: &str) -> usize {
    let mantissa = field.split(['e', 'E']).next().unwrap();
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').trim_end_matches('0').len()
}

#[test]
fn bound_emits_the_documented_record() {
    let o = relhur(&["bound", "--d", "1.0"]);
    let text = stdout(&o);
    assert!(
        text.starts_with(r#"{"d":1.0,"gamma":"#) && text.ends_with(",\"tol\":1e-7}\n"),
        "{text}"
    );
    let v = json(&o);
    assert!((v["gamma"].as_f64().unwrap() - 1.672_106_402_79).abs() < 1e-6);

    let v = json(&relhur(&["bound", "--d-inf"]));
    assert_eq!(v["d"], "inf");
    assert!((v["gamma"].as_f64().unwrap() - (1.0 + 5f64.sqrt() / 2.0)).abs() < 1e-6);
}

#[test]
fn sweep_csv_has_stable_schema_and_order() {
    let o = relhur(&["sweep", "--d-min", "0.01", "--d-max", "100", "--points", "5", "--log"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,gamma,err_est"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], 0.01);
    assert_eq!(rows[4][0], 100.0);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0] && w[1][1] > w[0][1]);
    }
    for field in text.lines().skip(1).flat_map(|l| l.split(',')) {
        assert!(significant_digits(field) <= 12, "{field}");
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let args = ["sweep", "--d-min", "0.5", "--d-max", "8", "--points", "6"];
    let one = relhur_threads(&args, "1");
    let four = relhur_threads(&args, "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, relhur(&args).stdout);
    assert_eq!(relhur_threads(&["bound", "--d", "1"], "zero").status.code(), Some(2));
}

#[test]
fn sweep_json_is_an_array_of_rows() {
    let v = json(&relhur(&[
        "sweep", "--d-min", "0", "--d-max", "2", "--points", "3", "--format", "json",
    ]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["param"], 1.0);
    assert!((rows[0]["gamma"].as_f64().unwrap() - 1.5).abs() < 1e-7);
    assert!(rows.iter().all(|r| r["err_est"].as_f64().unwrap() >= 0.0));
}

#[test]
fn hydrogen_weak_field_is_close_to_sqrt_seven_halves() {
    let v = json(&relhur(&["hydrogen", "--Z", "1"]));
    assert_eq!(v["Z"], 1);
    assert!((v["gamma"].as_f64().unwrap() - 3.5f64.sqrt()).abs() < 1e-4);
    assert!(v.get("oracle").is_none());

    let v = json(&relhur(&["hydrogen", "--Z", "80", "--oracle"]));
    let oracle = v["oracle"]["gamma"].as_f64().unwrap();
    assert!((oracle - v["gamma_exact"].as_f64().unwrap()).abs() < 1e-9);
    assert!((oracle - 2.361_374_481_906_5).abs() < 1e-6);
}

#[test]
fn hydrogen_with_custom_alpha() {
    let v = json(&relhur(&["hydrogen", "--Z", "50", "--alpha", "0.01"]));
    assert!((v["gamma_c"].as_f64().unwrap() - 0.75f64.sqrt()).abs() < 1e-11);
}

#[test]
fn hopfion_single_point_and_curve() {
    let v = json(&relhur(&["hopfion", "--a", "1"]));
    assert!((v["gamma"].as_f64().unwrap() - 1.964_911_186_995).abs() < 1e-6);

    let o = relhur(&["hopfion", "--a-min", "1", "--a-max", "50", "--points", "4", "--log"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let gammas: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gammas.len(), 4);
    assert!(gammas.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn verify_passes_and_strict_reports_the_closed_form_mismatch() {
    let o = relhur(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 5, "{text}");

    let o = relhur(&["verify", "--strict"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with("FAIL")).count(), 2);

    let v = json(&relhur(&["verify", "--format", "json"]));
    assert!(v.as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["bound"][..],
        &["bound", "--d", "1", "--d-inf"],
        &["bound", "--d", "-1"],
        &["bound", "--d", "1", "--tol", "1e-12"],
        &["sweep", "--d-min", "0", "--d-max", "1", "--points", "3", "--log"],
        &["sweep", "--d-min", "2", "--d-max", "1", "--points", "3"],
        &["hydrogen", "--Z", "137"],
        &["hydrogen", "--Z", "138"],
        &["hopfion", "--a", "200"],
        &["hopfion", "--a-min", "1"],
        &["bound", "--d", "1", "--unknown"],
        &["frobnicate"],
    ] {
        let o = relhur(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn output_flag_writes_the_document_to_a_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bound_d2.csv");
    let o = relhur(&[
        "bound",
        "--d",
        "2",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("param,gamma,err_est\n2.0,"));
    let bad = relhur(&["bound", "--d", "2", "--output", "/nonexistent/dir/x.json"]);
    assert_eq!(bad.status.code(), Some(2));
}
