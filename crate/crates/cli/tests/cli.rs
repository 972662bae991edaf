use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rauzy(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rauzy"))
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .env("RAUZY_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn analyze_reports_dimensions_and_multipliers() {
    let dir = tempfile::tempdir().unwrap();
    let ssm = json(&rauzy(dir.path(), &["analyze", "--preset", "ssm"]));
    assert!((ssm["dim_h"].as_f64().unwrap() - 0.89745).abs() < 1e-4);
    assert_eq!(ssm["density"], "(2+1*sqrt2)/4");
    let sigma = json(&rauzy(dir.path(), &["analyze", "--preset", "sigma"]));
    assert_eq!(sigma["pf_multiplier"], "3+2*sqrt2");
    let fib = json(&rauzy(dir.path(), &["analyze", "--preset", "fibonacci"]));
    assert_eq!(fib["dim_h"].as_f64(), Some(0.0));
    // the report file matches stdout
    let file: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sigma_analysis.json")).unwrap())
            .unwrap();
    assert_eq!(file, sigma);
}

#[test]
fn core_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    json(&rauzy(dir.path(), &["core", "--preset", "ssm"]));
    let text = fs::read_to_string(dir.path().join("ssm_core.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("pair,z,value_exact,value_float"));
    // ν_aa(0) = λ − 2
    assert!(text.contains("aa,0+0*sqrt2,(-1+1*sqrt2)/1,0.41421356237309"));

    json(&rauzy(dir.path(), &["core", "--preset", "sigma"]));
    let text = fs::read_to_string(dir.path().join("sigma_core.csv")).unwrap();
    // ν_ab(λ+1) = (3λ−7)/2 = (−4+3√2)/2
    let row = text
        .lines()
        .find(|l| l.starts_with("ab,2+1*sqrt2,"))
        .expect("row present");
    assert!(row.contains("(-4+3*sqrt2)/2,0.12132"), "{row}");
}

#[test]
fn covariogram_is_deterministic_and_scaled() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = write_config(
        a.path(),
        r#"{"substitution": "ssm", "sample_cap": 40000, "pairs": ["total", "ab"]}"#,
    );
    let ra = json(&rauzy(a.path(), &["covariogram", "--config", &cfg]));
    let rb = json(
        &Command::new(env!("CARGO_BIN_EXE_rauzy"))
            .args(["covariogram", "--config", &cfg, "--output-dir"])
            .arg(b.path())
            .env("RAUZY_THREADS", "1")
            .output()
            .unwrap(),
    );
    assert_eq!(ra, rb);
    assert!(ra["points"].as_u64().unwrap() >= 35_323);
    assert_eq!(ra["rows"].as_u64(), ra["points"].as_u64().map(|p| 2 * p));
    let ca = fs::read(a.path().join("ssm_covariogram.csv")).unwrap();
    let cb = fs::read(b.path().join("ssm_covariogram.csv")).unwrap();
    assert_eq!(ca, cb);
    let strip = |p: &Path| -> Vec<String> {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("<!--"))
            .map(String::from)
            .collect()
    };
    assert_eq!(
        strip(&a.path().join("ssm_covariogram.svg")),
        strip(&b.path().join("ssm_covariogram.svg"))
    );
    let header = String::from_utf8_lossy(&ca)
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(
        header,
        "pair,za,zb,zstar_float,value_exact,value_float,parity"
    );
}

#[test]
fn sigma_parity_coloring_has_two_classes() {
    let dir = tempfile::tempdir().unwrap();
    let out = json(&rauzy(
        dir.path(),
        &[
            "covariogram",
            "--preset",
            "sigma",
            "--patch-level",
            "3",
            "--color-by",
            "parity",
        ],
    ));
    assert_eq!(out["classes"], 2);
    let svg = fs::read_to_string(dir.path().join("sigma_covariogram.svg")).unwrap();
    assert_eq!(svg.matches("class=\"series\"").count(), 2);
    let csv = fs::read_to_string(dir.path().join("sigma_covariogram.csv")).unwrap();
    let rows = csv.lines().skip(1).count();
    let even = csv.lines().filter(|l| l.ends_with(",even")).count();
    let odd = csv.lines().filter(|l| l.ends_with(",odd")).count();
    assert!(even > 0 && odd > 0);
    assert_eq!(even + odd, rows);
    assert_eq!(svg.matches("<circle").count(), rows);
}

#[test]
fn windows_and_hausdorff_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let w = json(&rauzy(dir.path(), &["windows", "--preset", "ssm"]));
    let csv = fs::read_to_string(dir.path().join("ssm_windows.csv")).unwrap();
    assert!(csv.starts_with("letter,a,b,xstar_float\n"));
    let n = w["points"]["a"].as_u64().unwrap() + w["points"]["b"].as_u64().unwrap();
    assert_eq!(csv.lines().count() as u64, n + 1);
    let h = json(&rauzy(dir.path(), &["hausdorff", "--preset", "ssm"]));
    assert_eq!(h["factor"], "x^3 - 2x^2 - 1");
    assert_eq!(h["discrepancy_count"], 7);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| rauzy(dir.path(), args).status.code();
    assert_eq!(code(&["core", "--preset", "nonesuch"]), Some(2));
    assert_eq!(code(&["core", "--patch-level", "0"]), Some(2));
    let bad = write_config(dir.path(), "{ not json");
    assert_eq!(code(&["core", "--config", &bad]), Some(2));
    assert_eq!(code(&["core", "--rule", "a -> a; b -> b"]), Some(3));
    assert_eq!(code(&["core", "--rule", "a -> ab; b -> ab"]), Some(3));
    assert_eq!(code(&["core", "--preset", "ssm", "--seed", "a|c"]), Some(3));
    // a fixed cutoff below the closure bound
    let small = write_config(dir.path(), r#"{"substitution": "ssm", "cutoff": "1"}"#);
    assert_eq!(code(&["core", "--config", &small]), Some(2));
    // nothing was written by the failures
    let written: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "config.json")
        .collect();
    assert!(written.is_empty(), "{written:?}");
}

#[test]
fn check_passes_and_catches_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let small = r#""patch_level": 7, "check": {"residual_distances": 500, "property_samples": 3000}, "oracle": {"distances": 30}"#;
    let ok = write_config(
        dir.path(),
        &format!(r#"{{"substitution": "ssm", {small}}}"#),
    );
    let report = json(&rauzy(dir.path(), &["check", "--config", &ok]));
    assert_eq!(report["passed"], true);

    let bad = write_config(
        dir.path(),
        &format!(
            r#"{{"substitution": "ssm", {small}, "corrupt_core": {{"pair": "aa", "z": "1", "value": "1/3"}}}}"#
        ),
    );
    let out = rauzy(dir.path(), &["check", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let residual = &report["suites"][0];
    assert_eq!(residual["name"], "residual");
    assert!(residual["failures"].as_u64().unwrap() > 0);
    assert!(residual["max_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn oracle_tolerance_controls_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = json(&rauzy(
        dir.path(),
        &["oracle", "--preset", "ssm", "--patch-level", "10"],
    ));
    assert_eq!(out["passed"], true);
    let strict = write_config(
        dir.path(),
        r#"{"substitution": "ssm", "patch_level": 6, "tolerance": {"oracle_max": 1e-12, "oracle_median": 1e-12}}"#,
    );
    assert_eq!(
        rauzy(dir.path(), &["oracle", "--config", &strict])
            .status
            .code(),
        Some(1)
    );
    let csv = fs::read_to_string(dir.path().join("ssm_oracle.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4 * 200);
}
