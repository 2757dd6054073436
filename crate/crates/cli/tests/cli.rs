use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ttc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttc")).args(args).output().expect("spawn ttc")
}

fn ttc_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--output-dir", dir.to_str().unwrap()]);
    ttc(&all)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn meta(dir: &Path, stem: &str) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{stem}.meta.json"))).unwrap()).unwrap()
}

#[test]
fn empty_args_print_usage_and_exit_2() {
    let o = ttc(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).to_lowercase().contains("usage"));
}

#[test]
fn inverted_time_range_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = ttc_in(dir.path(), &["survival", "--t-min", "5", "--t-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("t-min"));
}

#[test]
fn rmt_refs_reports_cue_ipr() {
    let dir = TempDir::new().unwrap();
    let o = ttc_in(dir.path(), &["--experiment", "rmt-refs", "--N", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = meta(dir.path(), "rmt-refs");
    let ipr = m["rmt_references"]["ipr_cue"].as_f64().unwrap();
    assert!((ipr - 2.0 * 61.0 / 62.0).abs() < 1e-12);
    assert!((ipr - 1.9677).abs() < 1e-4);
    let text = fs::read_to_string(dir.path().join("rmt-refs.csv")).unwrap();
    assert!(text.starts_with("quantity,value\n"));
    assert!(text.lines().any(|l| l.starts_with("ipr_cue,1.96774")));
}

#[test]
fn verify_reduction_discrepancies_are_tiny() {
    let dir = TempDir::new().unwrap();
    let o = ttc_in(dir.path(), &["verify-reduction", "--N", "4", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("verify-reduction.csv"));
    let col = header.iter().position(|h| h == "discrepancy").unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[col] < 1e-10));
}

#[test]
fn unknown_config_key_is_named() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "experiment = rmt-refs\nbogus_knob = 3\n").unwrap();
    let o = ttc_in(dir.path(), &["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus_knob"));
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# reference values\nexperiment = rmt-refs\nN = 10\nseed = 4\n").unwrap();
    let o = ttc_in(dir.path(), &["--config", cfg.to_str().unwrap(), "--N", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = meta(dir.path(), "rmt-refs");
    assert_eq!(m["config"]["params"]["n"], 20);
    assert_eq!(m["seed"], 4);
}

#[test]
fn runs_are_deterministic() {
    let args = ["basis-survival", "--N", "8", "--n", "3", "--t-steps", "21", "--seed", "11"];
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        assert_eq!(ttc_in(d.path(), &args).status.code(), Some(0));
    }
    let read = |d: &TempDir| fs::read(d.path().join("basis-survival.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn kz_sweep_writes_one_row_per_point() {
    let dir = TempDir::new().unwrap();
    let args = ["lyapunov", "--kz-sweep", "0:6:4", "--n-samples", "4", "--n-cycles", "2", "--period", "1", "--dt", "0.01"];
    let o = ttc_in(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("lyapunov.csv"));
    assert_eq!(header, ["kz", "T", "lambda_mean", "lambda_std", "n_discarded"]);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [0.0, 2.0, 4.0, 6.0]);
}

#[test]
fn phase_portrait_writes_one_file_per_start() {
    let dir = TempDir::new().unwrap();
    let o = ttc_in(dir.path(), &["phase-portrait", "--period", "1", "--n-cycles", "3", "--dt", "0.01"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for name in ["sz", "sx", "random"] {
        let (header, rows) = read_csv(&dir.path().join(format!("phase-portrait-{name}.csv")));
        assert_eq!(header, ["cycle", "half", "z", "phi"]);
        assert!(rows.iter().all(|r| r[2].abs() <= 1.0 + 1e-9));
    }
}

#[test]
fn every_output_has_header_and_meta() {
    let dir = TempDir::new().unwrap();
    for exp in ["eigenphases", "spacing-ratio", "survival"] {
        let o = ttc_in(dir.path(), &[exp, "--N", "6", "--n", "2", "--t-steps", "5"]);
        assert_eq!(o.status.code(), Some(0), "{exp}: {}", stderr(&o));
        let (header, rows) = read_csv(&dir.path().join(format!("{exp}.csv")));
        assert_eq!(header[0], "t");
        assert_eq!(rows.len(), 5);
        assert_eq!(meta(dir.path(), exp)["experiment"], exp);
    }
}

#[test]
fn preset_and_experiment_conflict() {
    let o = ttc(&["survival", "--preset", "fig7"]);
    assert_eq!(o.status.code(), Some(2));
}
