use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn pwtrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwtrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json!({"re": x, "im": 0.0})).collect())
}

fn half_integers(k_max: i64) -> Vec<f64> {
    (1..=k_max)
        .flat_map(|k| [k as f64 - 0.5, -(k as f64 - 0.5)])
        .collect()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn lattice_partition_is_all_singletons() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "lattice.json", &json!({"nodes": reals(&half_integers(50))}));
    let v = stdout_json(&pwtrace(&["partition", "--input", p(&f), "--capacity", "1", "--epsilon", "1"]));
    assert_eq!(v["cluster_count"], 100);
    let clusters = v["clusters"].as_array().unwrap();
    assert!(clusters.iter().all(|c| c["members"].as_array().unwrap().len() == 1));
    assert!(clusters.iter().all(|c| c["exp_sign"] == "plus"));
}

#[test]
fn triple_cluster_exceeds_capacity() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "triple.json", &json!({"nodes": reals(&[0.5, 0.52, 0.54, 3.5, 7.5])}));
    let out = pwtrace(&["partition", "--input", p(&f), "--capacity", "2", "--epsilon", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0.52+0i") && err.contains("capacity 2"), "{err}");
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"nodes\": [").unwrap();
    assert_eq!(pwtrace(&["partition", "--input", p(&path)]).status.code(), Some(1));
    let missing = dir.path().join("absent.json");
    assert_eq!(pwtrace(&["check", "--input", p(&missing)]).status.code(), Some(1));
    let zero = write(&dir, "zero.json", &json!({"nodes": reals(&[0.0, 1.0])}));
    assert_eq!(pwtrace(&["partition", "--input", p(&zero)]).status.code(), Some(1));
    assert_eq!(pwtrace(&["partition"]).status.code(), Some(1));
}

#[test]
fn check_reports_verdicts_as_data() {
    let dir = TempDir::new().unwrap();
    let lattice = write(&dir, "lattice.json", &json!({"nodes": reals(&half_integers(300))}));
    let v = stdout_json(&pwtrace(&["check", "--input", p(&lattice), "--mode", "ls"]));
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 5);
    for e in entries {
        assert_eq!(e["verdict"], "pass", "{e}");
    }

    let gapped: Vec<f64> = half_integers(300).into_iter().filter(|x| !(0.0..=100.0).contains(x)).collect();
    let gapped = write(&dir, "gapped.json", &json!({"nodes": reals(&gapped)}));
    let v = stdout_json(&pwtrace(&["check", "--input", p(&gapped), "--mode", "ls"]));
    let density = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == "relative_density")
        .unwrap();
    assert_eq!(density["verdict"], "fail");
}

#[test]
fn hn_check_on_paired_lattice() {
    let dir = TempDir::new().unwrap();
    let xs: Vec<f64> = (-60i64..=60)
        .flat_map(|k| {
            let x = k as f64 + 0.5;
            [x, x + 1.0 / (2.0 * (1.0 + k.abs() as f64))]
        })
        .collect();
    let f = write(&dir, "paired.json", &json!({"nodes": reals(&xs)}));
    let v = stdout_json(&pwtrace(&[
        "check", "--input", p(&f), "--mode", "hn", "--capacity", "2", "--epsilon", "1",
    ]));
    assert_eq!(v["mode"], "hn");
    assert_eq!(v["entries"].as_array().unwrap().len(), 5);
}

#[test]
fn norms_from_the_command_line() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "trace.json",
        &json!({
            "nodes": reals(&[0.5, 1.5, -2.5]),
            "trace": [{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 2.0}, {"re": -3.0, "im": 0.0}],
            "params": {"tau": std::f64::consts::PI, "p": 2.0, "epsilon": 0.5, "capacity": 1}
        }),
    );
    let v = stdout_json(&pwtrace(&["norm", "--input", p(&f), "--space", "partition"]));
    assert!((v["norm"].as_f64().unwrap() - 14f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);

    let zero = write(
        &dir,
        "zero.json",
        &json!({"nodes": reals(&[0.5, 1.5]), "trace": [{"re": 0.0, "im": 0.0}, {"re": 0.0, "im": 0.0}]}),
    );
    let v = stdout_json(&pwtrace(&["norm", "--input", p(&zero), "--space", "neighbors"]));
    assert_eq!(v["norm"].as_f64().unwrap(), 0.0);

    let upper = write(
        &dir,
        "upper.json",
        &json!({
            "nodes": [{"re": 0.0, "im": 1.0}, {"re": 0.0, "im": 2.0}],
            "trace": [{"re": 1.0, "im": 0.0}, {"re": 1.0, "im": 0.0}],
            "params": {"tau": 1.0, "p": 2.0, "epsilon": 2.0, "capacity": 2}
        }),
    );
    let v = stdout_json(&pwtrace(&["norm", "--input", p(&upper), "--space", "halfplane"]));
    assert!((v["norm"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);

    let bare = write(&dir, "bare.json", &json!({"nodes": reals(&[0.5])}));
    assert_eq!(pwtrace(&["norm", "--input", p(&bare)]).status.code(), Some(1));
}

#[test]
fn profile_csv_rows() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "lattice.json", &json!({"nodes": reals(&half_integers(200))}));
    let out = dir.path().join("profile.csv");
    let run = pwtrace(&["profile", "--input", p(&f), "--grid", "-5:5:0.01", "--epsilon", "1", "--out", p(&out)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,abs_S,d_N,weight");
    assert_eq!(lines.len(), 1002);
    let at_node: Vec<&&str> = lines.iter().filter(|l| l.ends_with(",inf")).collect();
    assert_eq!(at_node.len(), 10);
    let weights: Vec<f64> = lines[1..].iter().filter_map(|l| l.rsplit(',').next()?.parse().ok()).collect();
    let (lo, hi) = weights
        .iter()
        .filter(|w| w.is_finite())
        .fold((f64::INFINITY, 0.0f64), |(a, b), &w| (a.min(w), b.max(w)));
    assert!(lo > 1.0 && hi < 20.0, "[{lo}, {hi}]");

    let empty = pwtrace(&["profile", "--input", p(&f), "--grid", "1:0:0.1"]);
    assert_eq!(empty.status.code(), Some(1));
}

#[test]
fn interpolation_at_and_between_nodes() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "pair.json",
        &json!({"nodes": reals(&[0.5, -0.5]), "trace": [{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}]}),
    );
    let pts = write(&dir, "pts.json", &json!([{"re": 0.0, "im": 0.0}, {"re": 0.5, "im": 0.0}]));
    let v = stdout_json(&pwtrace(&["interpolate", "--input", p(&f), "--eval", p(&pts)]));
    assert!((v[0]["value"]["re"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!((v[1]["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-15);

    let bare = write(&dir, "bare.json", &json!({"nodes": reals(&[0.5, -0.5])}));
    let out = pwtrace(&["interpolate", "--input", p(&bare), "--eval", p(&pts)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "lattice.json", &json!({"nodes": reals(&half_integers(100))}));
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_pwtrace"))
            .args(["profile", "--input", p(&f), "--grid", "-2:2:0.05"])
            .env("PWTRACE_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let a = run("1");
    assert_eq!(a, run("4"));
    assert_eq!(a, run("1"));
    let check = || pwtrace(&["check", "--input", p(&f)]).stdout;
    assert_eq!(check(), check());
}
