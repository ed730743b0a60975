use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn fertaper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fertaper"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a JSON report ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn assert_all_passed(v: &Value) {
    assert_eq!(v["passed"], Value::Bool(true), "{v:#}");
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["passed"], Value::Bool(true), "{c}");
    }
}

fn check<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name} in {v:#}"))
}

#[test]
fn h2_tapers_to_one_qubit() {
    let h2 = data("h2.json");
    let out = fertaper(&[
        "encode",
        "--input",
        h2.to_str().unwrap(),
        "--taper",
        "--verification",
        "dense-oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_all_passed(&v);
    assert_eq!(v["qubits_before"], 4);
    assert_eq!(v["qubits_after"], 1);
    let gens: Vec<&str> = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.as_str().unwrap())
        .collect();
    assert_eq!(gens, ["ZZII", "ZIZI", "ZIIZ"]);
    assert_eq!(v["sectors"].as_array().unwrap().len(), 8);
    check(&v, "sector_union_matches_spectrum");
}

#[test]
fn fixed_sector_writes_tapered_hamiltonian() {
    let dir = tempfile::tempdir().unwrap();
    let (encoded, tapered) = (dir.path().join("h2.txt"), dir.path().join("tapered.txt"));
    let h2 = data("h2.json");
    let out = fertaper(&[
        "encode",
        "--input",
        h2.to_str().unwrap(),
        "--output",
        encoded.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = fertaper(&[
        "taper",
        "--input",
        encoded.to_str().unwrap(),
        "--sector",
        "+--",
        "--output",
        tapered.to_str().unwrap(),
        "--verification",
        "dense-oracle",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_all_passed(&report(&out));
    let h = fertaper_core::QubitHamiltonian::read(&tapered).unwrap();
    assert_eq!(h.num_qubits(), 1);
}

#[test]
fn empty_hamiltonian_is_flagged_degenerate() {
    let empty = data("empty.json");
    let out = fertaper(&["encode", "--input", empty.to_str().unwrap(), "--taper"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["degenerate"], Value::Bool(true));
    assert_eq!(v["terms"], 0);
    assert_eq!(v["qubits_after"], 0);
}

#[test]
fn graph_codesim_meets_sparsity_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let framed = dir.path().join("framed.json");
    let (graph, input) = (data("q12n2.graph"), data("q12n2.json"));
    let out = fertaper(&[
        "codesim",
        "--graph",
        graph.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--output",
        framed.to_str().unwrap(),
        "--verification",
        "dense-oracle",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = report(&out);
    assert_all_passed(&v);
    assert_eq!(v["sparsity"]["r2"], 2);
    assert!(v["sparsity"]["r4"].as_u64().unwrap() <= 32);
    check(&v, "decode_cross_check");
    check(&v, "codespace_spectrum_matches_sector");
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&framed).unwrap()).unwrap();
    assert_eq!(file["qubits"], 12);
    assert!(!file["terms"].as_array().unwrap().is_empty());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let input = data("m4n2.json");
    let args = ["firstq", "--input", input.to_str().unwrap(), "--seed", "3"];
    let a = fertaper(&args);
    let b = fertaper(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = fertaper(&[
        "oa",
        "--m",
        "2",
        "--verify",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.lines().all(|l| l.starts_with("PASS ")), "{summary}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "oa");
    assert_all_passed(&v);
}

#[test]
fn failed_check_exits_one() {
    // one greedy trial cannot reach the (20, 3) mode count
    let out = fertaper(&["verify", "--suite", "graph", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], Value::Bool(false));
}

#[test]
fn errors_exit_two_and_name_the_file() {
    let out = fertaper(&["encode", "--input", "/nonexistent/h.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/nonexistent/h.json"), "{err}");

    let out = fertaper(&["encode"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in ["h2", "spectra", "oa", "decode", "hperp"] {
        let out = fertaper(&["verify", "--suite", suite, "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
        let v = report(&out);
        assert_all_passed(&v);
        assert_eq!(v["command"], format!("verify {suite}"));
    }
}

#[test]
fn decode_recovers_occupied_modes() {
    let graph = data("q12n2.graph");
    let g = fertaper_core::BipartiteGraph::read(&graph).unwrap();
    let enc = fertaper_core::CodeEncoding::from_graph(&g, 2).unwrap();
    let x = fertaper_core::BitVector::from_positions(enc.modes(), [1, 5]);
    let bits = enc.encode_state(&x).unwrap().to_string();
    let out = fertaper(&[
        "decode",
        "--graph",
        graph.to_str().unwrap(),
        "--particles",
        "2",
        "--syndrome",
        &bits,
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = report(&out);
    assert_all_passed(&v);
    assert_eq!(v["data"]["occupied"], serde_json::json!([1, 5]));
}

#[test]
fn help_lists_subcommands_and_flags() {
    let out = fertaper(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8(out.stdout).unwrap();
    for sub in [
        "encode",
        "taper",
        "codesim",
        "graphgen",
        "graphtable",
        "decode",
        "firstq",
        "oa",
        "hperp",
        "verify",
    ] {
        assert!(help.contains(sub), "missing {sub}");
    }
    for flag in ["--report", "--verification", "--seed", "--timings"] {
        assert!(help.contains(flag), "missing {flag}");
    }
}

#[test]
fn graphgen_then_graphtable() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.graph");
    let out = fertaper(&[
        "graphgen",
        "--qubits",
        "10",
        "--particles",
        "2",
        "--trials",
        "50",
        "--out",
        g.to_str().unwrap(),
        "--verification",
        "dense-oracle",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_all_passed(&report(&out));
    let graph = fertaper_core::BipartiteGraph::read(&g).unwrap();
    assert_eq!(graph.num_vertices(), 10);

    let out = fertaper(&["graphtable", "--qmax", "8", "--nmax", "2", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(
        csv.starts_with("qubits,particles,modes,girth,modes_per_qubit\n"),
        "{csv}"
    );
}
