use std::path::PathBuf;
use std::process::{Command, Output};

use distinguish::{DecompTree, TreeDump};
use serde_json::Value;

fn dist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dist")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn c5() -> PathBuf {
    write("c5.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n")
}

#[test]
fn compute_c5() {
    let out = dist(&["compute", c5().to_str().unwrap(), "--k", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["L"].as_str(), v["D"].as_str(), v["aut"].as_str()), (Some("120"), Some("12"), Some("10")));
    assert!(v["timing_ms"].is_number());
}

#[test]
fn number_and_poly() {
    let path = c5();
    let v = json(&dist(&["number", path.to_str().unwrap()]));
    assert_eq!(v["D_number"], 3);
    let v = json(&dist(&["poly", path.to_str().unwrap()]));
    let coeffs: Vec<&str> = v["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["0", "2/5", "0", "-1/2", "0", "1/10"]);
    assert_eq!(v["degree"], 5);
}

#[test]
fn graph6_input() {
    // K4
    let path = write("k4.g6", "C~\n");
    let v = json(&dist(&["--format", "graph6", "compute", path.to_str().unwrap(), "--k", "4"]));
    assert_eq!(v["D"], "1");
    assert_eq!(v["aut"], "24");
}

#[test]
fn job_count_does_not_change_output() {
    let path = write("prism.txt", "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n0 3\n1 4\n2 5\n");
    let one = json(&dist(&["--jobs", "1", "compute", path.to_str().unwrap(), "--k", "4"]));
    let four = json(&dist(&["--jobs", "4", "compute", path.to_str().unwrap(), "--k", "4"]));
    assert_eq!(one["D"], four["D"]);
    assert_eq!(one["L"], four["L"]);
}

#[test]
fn tree_output_rebuilds() {
    let path = write("theta.txt", "0 1\n1 2\n0 3\n3 2\n0 4\n4 2\n2 5\n");
    let v = json(&dist(&["tree", path.to_str().unwrap()]));
    let dump: TreeDump = serde_json::from_value(v["tree"].clone()).unwrap();
    let tree = DecompTree::from_dump(&dump).unwrap();
    assert_eq!(tree.n, 6);
}

#[test]
fn aut_lists_cycles() {
    let v = json(&dist(&["aut", c5().to_str().unwrap()]));
    assert_eq!(v["order"], 10);
    assert_eq!(v["automorphisms"].as_array().unwrap().len(), 10);
    assert_eq!(v["automorphisms"][0], "()");
}

#[test]
fn verify_passes() {
    let out = dist(&["verify", "--max-n", "5", "--max-k", "3", "--family", "planar"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_u64().unwrap() > 0);
}

#[test]
fn exit_codes() {
    assert_eq!(dist(&["--help"]).status.code(), Some(0));
    assert_eq!(dist(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dist(&["compute", "/nonexistent/graph.txt", "--k", "2"]).status.code(), Some(1));
    let bad = write("loop.txt", "0 1\n1 1\n");
    let out = dist(&["compute", bad.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "parse");
    let dup = write("dup.txt", "0 1\n1 0\n");
    assert_eq!(dist(&["number", dup.to_str().unwrap()]).status.code(), Some(2));
    let two = write("two.txt", "0 1\n2 3\n");
    assert_eq!(dist(&["poly", two.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(dist(&["verify", "--max-n", "11"]).status.code(), Some(1));
}

#[test]
fn bench_reports_runs() {
    let v = json(&dist(&["bench", "--family", "wheel", "--sizes", "20,40", "--k", "3"]));
    assert_eq!(v["runs"].as_array().unwrap().len(), 2);
}
