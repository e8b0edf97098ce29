use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use pnn_cli::HEADER;

fn pnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnn")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pnn-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn csv_rows(out: &[u8]) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(out);
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), HEADER);
    reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect()
}

fn column(name: &str) -> usize {
    HEADER.iter().position(|&h| h == name).unwrap()
}

#[test]
fn zero_trials_is_a_config_error() {
    let out = pnn(&["sweep", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn bad_values_are_config_errors() {
    assert_eq!(pnn(&["sweep", "--kind", "pnn4"]).status.code(), Some(2));
    assert_eq!(pnn(&["sweep", "--sweep", "k", "--grid", "1"]).status.code(), Some(2));
    assert_eq!(pnn(&["dpnn-bench", "--N", "801", "--k", "4"]).status.code(), Some(2));
    assert_eq!(pnn(&["identify-bench", "--q", "1"]).status.code(), Some(2));
}

#[test]
fn infeasible_dpnn_exits_three() {
    let out = pnn(&["dpnn-bench", "--N", "50", "--k", "1", "--M", "5", "--a", "0.1", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn empty_grid_prints_header_only() {
    let out = pnn(&["sweep", "--sweep", "q", "--grid", ""]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{}\n", HEADER.join(",")));
}

#[test]
fn config_file_with_flag_override() {
    let path = scratch("sweep.cfg");
    fs::write(&path, "# small sweep\nN = 40\nM = 10\nq = 4\nb = 0.2\ntrials = 5\nseed = 9\n").unwrap();
    let out = pnn(&["sweep", "--config", path.to_str().unwrap(), "--q", "8"]);
    assert!(out.status.success());
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][column("N")], "40");
    assert_eq!(rows[0][column("q")], "8");
    assert_eq!(rows[0][column("seed")], "9");
    assert_eq!(rows[0][column("trials")], "5");

    fs::write(&path, "N = 40\nwidth = 3\n").unwrap();
    assert_eq!(pnn(&["sweep", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let path = scratch("theory.csv");
    let args = ["theory", "--N", "1000", "--q", "1"];
    let stdout = pnn(&args).stdout;
    let out = pnn(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), stdout);

    let rows = csv_rows(&stdout);
    let cap: f64 = rows[0][column("theory_capacity")].parse().unwrap();
    assert!((cap - 72.38).abs() < 5e-3);
}

#[test]
fn sweep_rows_follow_the_grid() {
    let out =
        pnn(&["sweep", "--N", "60", "--M", "60", "--b", "0.3", "--trials", "20", "--sweep", "q", "--grid", "16,1"]);
    assert!(out.status.success());
    let rows = csv_rows(&out.stdout);
    let q: Vec<&str> = rows.iter().map(|r| r[column("q")].as_str()).collect();
    assert_eq!(q, ["16", "1"]);
    let err = |r: &Vec<String>| r[column("pattern_err")].parse::<f64>().unwrap();
    assert_eq!(err(&rows[0]), 0.0);
    assert_eq!(err(&rows[1]), 1.0);
}

#[test]
fn dpnn_beats_hopfield_on_weakly_correlated_patterns() {
    let out =
        pnn(&["dpnn-bench", "--N", "800", "--k", "4", "--c", "0.3", "--M", "200", "--a", "0.1", "--trials", "30"]);
    assert!(out.status.success());
    let row = &csv_rows(&out.stdout)[0];
    let dpnn: f64 = row[column("pattern_err")].parse().unwrap();
    let hopfield: f64 = row[column("baseline_pattern_err")].parse().unwrap();
    assert!(dpnn <= 0.05, "dpnn pattern_err {dpnn}");
    assert!(hopfield >= 0.9, "hopfield pattern_err {hopfield}");
    assert!(row[column("k_c")].parse::<u32>().unwrap() >= 4);
}
