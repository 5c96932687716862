//! End-to-end runs of the `infoflow` binary.

use std::path::Path;
use std::process::{Command, Output};

use infoflow::cli::parse_csv;
use infoflow::{all_pairs, validate_series_set, AnalysisOptions, NanPolicy};
use tempfile::TempDir;

fn infoflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infoflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn simulate_to(dir: &TempDir, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["simulate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", path_str(&path)]);
    let out = infoflow(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn simulate_is_reproducible_for_a_seed() {
    let a = stdout(&infoflow(&["simulate", "--preset", "ou2", "--seed", "7", "--n", "2000"]));
    let b = stdout(&infoflow(&["simulate", "--preset", "ou2", "--seed", "7", "--n", "2000"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 2001);
    assert_eq!(a.lines().next(), Some("x1,x2"));
    let c = stdout(&infoflow(&["simulate", "--preset", "ou2", "--seed", "8", "--n", "2000"]));
    assert_ne!(a, c);
}

#[test]
fn constant_system_gives_constant_column() {
    let out = stdout(&infoflow(&["simulate", "--A", "0", "--B", "0", "--x0", "1", "--n", "100"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x1"));
    assert!(lines.all(|l| l == "1"));

    let neg = stdout(&infoflow(&["simulate", "--A", "0,0;0,0", "--B", "0,0;0,0", "--x0", "-2,0.5", "--n", "3"]));
    assert_eq!(neg, "x1,x2\n-2,0.5\n-2,0.5\n-2,0.5\n");
}

#[test]
fn analyze_json_matches_library_call() {
    let dir = TempDir::new().unwrap();
    let csv = simulate_to(&dir, "ou2.csv", &["--preset", "ou2", "--n", "20000", "--seed", "1"]);
    let out = stdout(&infoflow(&["analyze", "--input", path_str(&csv), "--dt", "0.01", "--normalize"]));
    let v = json(&out);
    assert_eq!(v["orientation"], "T[target][source]");

    let (names, columns) = parse_csv(&csv).unwrap();
    let set = validate_series_set(columns, names, 0.01, NanPolicy::Reject).unwrap();
    let fm = all_pairs(&set, &AnalysisOptions::default()).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let cli = v["T"][i][j].as_f64().unwrap();
            assert!((cli - fm.t[i][j]).abs() <= 1e-15, "T[{i}][{j}] {cli} vs {}", fm.t[i][j]);
            assert!(v["TAU"][i][j].as_f64().is_some());
        }
    }
}

#[test]
fn bivariate_mode_equals_multivariate_for_two_series() {
    let dir = TempDir::new().unwrap();
    let csv = simulate_to(&dir, "ou2.csv", &["--preset", "ou2", "--n", "5000", "--seed", "2"]);
    let run = |mode: &str| json(&stdout(&infoflow(&["analyze", "--input", path_str(&csv), "--mode", mode])));
    let (m, b) = (run("multivariate"), run("bivariate"));
    for key in ["T", "P", "SE"] {
        for i in 0..2 {
            for j in 0..2 {
                let (x, y) = (m[key][i][j].as_f64().unwrap(), b[key][i][j].as_f64().unwrap());
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "{key}[{i}][{j}] {x} vs {y}");
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let csv = simulate_to(&dir, "chain.csv", &["--preset", "chain5", "--n", "5000", "--seed", "3"]);
    let one = stdout(&infoflow(&["analyze", "--input", path_str(&csv), "--workers", "1", "--normalize"]));
    let four = stdout(&infoflow(&["analyze", "--input", path_str(&csv), "--workers", "4", "--normalize"]));
    assert_eq!(one, four);
}

#[test]
fn chain_pipeline_recovers_edges() {
    let dir = TempDir::new().unwrap();
    let csv = simulate_to(&dir, "chain.csv", &["--preset", "chain5", "--seed", "4"]);
    let out = stdout(&infoflow(&[
        "graph", "--input", path_str(&csv), "--dt", "0.01", "--bonferroni", "--format", "json",
    ]));
    let g = json(&out);
    assert_eq!(g["nodes"][0], "x1");
    let mut edges: Vec<(u64, u64)> = g["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["source"].as_u64().unwrap(), e["target"].as_u64().unwrap()))
        .collect();
    edges.sort();
    let expect: Vec<(u64, u64)> = (0..4).map(|i| (i, i + 1)).collect();
    assert_eq!(edges, expect);
    assert_eq!(g["self_loops"].as_array().unwrap().len(), 5);

    let dot = stdout(&infoflow(&["graph", "--input", path_str(&csv), "--dt", "0.01", "--bonferroni"]));
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"x1\" -> \"x2\""));
    assert!(!dot.contains("\"x2\" -> \"x1\""));
}

#[test]
fn analyze_csv_table_has_a_row_per_pair() {
    let dir = TempDir::new().unwrap();
    let csv = simulate_to(&dir, "ou2.csv", &["--preset", "ou2", "--n", "3000"]);
    let out = stdout(&infoflow(&["analyze", "--input", path_str(&csv), "--format", "csv"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "target,source,T,SE,P,TAU");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("x1,x2,"));
}

#[test]
fn oracle_reports_flows_and_budget() {
    let v = json(&stdout(&infoflow(&["oracle", "--preset", "ou2"])));
    assert!((v["T"][0][1].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-15);
    assert_eq!(v["T"][1][0].as_f64().unwrap(), 0.0);
    assert!(v["max_budget_residual"].as_f64().unwrap() <= 1e-12);

    let diag = json(&stdout(&infoflow(&["oracle", "--A", "-1,0;0,-2", "--f", "-3,1"])));
    assert_eq!(diag["T"][0][1].as_f64().unwrap(), 0.0);
    assert_eq!(diag["T"][1][0].as_f64().unwrap(), 0.0);
    assert_eq!(diag["T"][1][1].as_f64().unwrap(), -2.0);
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("oracle.json");
    let out = infoflow(&["oracle", "--preset", "ou2", "--output", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v = json(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(v["names"][0], "x1");
}

#[test]
fn input_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.csv");
    assert_eq!(infoflow(&["analyze", "--input", path_str(&missing)]).status.code(), Some(2));

    let nan = dir.path().join("nan.csv");
    std::fs::write(&nan, "a,b\n1,2\n2,\n3,1\n4,5\n5,3\n6,1\n").unwrap();
    let out = infoflow(&["analyze", "--input", path_str(&nan)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b"));
    assert_eq!(
        infoflow(&["analyze", "--input", path_str(&nan), "--nan-policy", "interpolate"]).status.code(),
        Some(0)
    );

    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "a,b\n1,2\n3\n").unwrap();
    assert_eq!(infoflow(&["analyze", "--input", path_str(&ragged)]).status.code(), Some(2));

    assert_eq!(infoflow(&["analyze", "--input", path_str(&nan), "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(infoflow(&["analyze", "--bogus"]).status.code(), Some(2));
}

#[test]
fn collinear_input_exits_with_3() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("collinear.csv");
    let mut text = String::from("a,b,c\n");
    for t in 0..200 {
        let a = (t as f64 * 0.37).sin();
        let b = (t as f64 * 0.11).cos();
        text.push_str(&format!("{a},{b},{}\n", 2.0 * a - b));
    }
    std::fs::write(&path, text).unwrap();
    let out = infoflow(&["analyze", "--input", path_str(&path)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn non_hurwitz_system_is_rejected_when_stationarity_is_required() {
    let out = infoflow(&["simulate", "--A", "0.5", "--require-stationary"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_lists_subcommands_and_flags() {
    let top = stdout(&infoflow(&["--help"]));
    for sub in ["analyze", "simulate", "oracle", "graph", "bench"] {
        assert!(top.contains(sub), "missing {sub}");
    }
    let graph = stdout(&infoflow(&["graph", "--help"]));
    for flag in ["--min-tau", "--bonferroni", "--format", "--alpha"] {
        assert!(graph.contains(flag), "missing {flag}");
    }
}

#[test]
fn bench_reports_timings() {
    let v = json(&stdout(&infoflow(&["bench", "--d", "8", "--n", "2000", "--repetitions", "2"])));
    assert_eq!(v["relations"].as_u64(), Some(56));
    assert!(v["median_seconds"].as_f64().unwrap() >= 0.0);
}
