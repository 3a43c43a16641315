use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qbsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbsc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn run_to_json(config: &Path, out: &Path, extra: &[&str]) -> Value {
    let mut args = vec!["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = qbsc(&args);
    assert!(o.status.success(), "{}: {}", config.display(), stderr(&o));
    serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn every_sample_config_runs() {
    let dir = TempDir::new().unwrap();
    let mut count = 0;
    for entry in fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "toml") {
            continue;
        }
        count += 1;
        let v = run_to_json(&path, &dir.path().join("out.json"), &[]);
        let total: f64 = v["distribution"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["probability"].as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-10, "{}: {total}", path.display());
        assert!(v["timing"]["wall_seconds"].as_f64().unwrap() >= 0.0);
    }
    assert_eq!(count, 7);
}

#[test]
fn identical_runs_match_except_timing() {
    let dir = TempDir::new().unwrap();
    for name in ["minimum.toml", "prime.toml", "factor.toml", "threshold.toml"] {
        let config = configs_dir().join(name);
        let a = run_to_json(&config, &dir.path().join("a.json"), &["--shots", "64"]);
        let b = run_to_json(&config, &dir.path().join("b.json"), &["--shots", "64"]);
        assert_eq!(without_timing(a), without_timing(b), "{name}");
    }
}

#[test]
fn seed_override_is_echoed() {
    let dir = TempDir::new().unwrap();
    let v = run_to_json(
        &configs_dir().join("minimum.toml"),
        &dir.path().join("out.json"),
        &["--seed", "77"],
    );
    assert_eq!(v["config"]["seed"], 77);
}

#[test]
fn shots_sum_to_request() {
    let dir = TempDir::new().unwrap();
    let v = run_to_json(
        &configs_dir().join("threshold.toml"),
        &dir.path().join("out.json"),
        &["--shots", "500"],
    );
    let total: u64 = v["samples"]
        .as_object()
        .unwrap()
        .values()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(total, 500);
}

#[test]
fn threshold_reports_marked_set() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "t.toml",
        "kind = \"threshold\"\n[params]\nn = 4\nreference = 7\nrelation = \"lt\"\n",
    );
    let v = run_to_json(&config, &dir.path().join("out.json"), &[]);
    let marked: Vec<u64> = v["details"]["marked"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(marked, (0..7).collect::<Vec<_>>());
    let mass = v["scalars"]["marked_mass"].as_f64().unwrap();
    let predicted = v["scalars"]["predicted_success"].as_f64().unwrap();
    assert!((mass - predicted).abs() < 1e-9);
}

#[test]
fn validate_accepts_samples() {
    for name in ["compare.toml", "zero.toml", "conditional.toml"] {
        let path = configs_dir().join(name);
        let o = qbsc(&["validate", "--config", path.to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
    }
}

#[test]
fn negative_width_names_the_field() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "bad.toml",
        "kind = \"threshold\"\n[params]\nn = -3\nreference = 1\nrelation = \"gt\"\n",
    );
    let o = qbsc(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("params.n"), "{}", stderr(&o));
}

#[test]
fn even_candidate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "bad.toml", "kind = \"prime\"\n[params]\na = 16\n");
    let out = dir.path().join("out.json");
    let o = qbsc(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("a must be odd"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn short_table_is_rejected() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "bad.toml",
        "kind = \"zero\"\n[params]\nn = 3\noutput_width = 2\ntable = [0, 1, 2]\n",
    );
    let o = qbsc(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("params.table"), "{}", stderr(&o));
}

#[test]
fn unknown_kind_and_field_are_both_reported() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "bad.toml", "kind = \"sort\"\ncolour = 1\n[params]\n");
    let o = qbsc(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("kind"), "{err}");
    assert!(err.contains("colour"), "{err}");
}

#[test]
fn missing_config_fails() {
    let o = qbsc(&["run", "--config", "/nonexistent/config.toml"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("cannot read"), "{}", stderr(&o));
}

#[test]
fn plot_writes_sorted_csv() {
    let dir = TempDir::new().unwrap();
    let result = dir.path().join("r.json");
    let v = run_to_json(&configs_dir().join("zero.toml"), &result, &[]);
    let csv_path = dir.path().join("p.csv");
    let o = qbsc(&[
        "plot",
        "--result",
        result.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("outcome,probability"));
    let parsed: Vec<(u64, f64)> = lines
        .map(|l| {
            let (o, p) = l.split_once(',').unwrap();
            (o.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert_eq!(parsed.len(), v["distribution"].as_array().unwrap().len());
    assert!(parsed.windows(2).all(|w| w[0].0 < w[1].0));
    let top = parsed.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert_eq!(top.0, 5);
}

#[test]
fn plot_rejects_non_result() {
    let dir = TempDir::new().unwrap();
    let bogus = write(&dir, "x.json", "{\"hello\": 1}");
    let o = qbsc(&["plot", "--result", bogus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
