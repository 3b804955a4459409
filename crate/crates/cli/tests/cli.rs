//! End-to-end tests of the `selfsim` binary: exit codes, golden outputs,
//! determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn validate_exit_codes() {
    let ok = selfsim(&["validate", data("specs/basilica.grp").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(json["is_automaton_group"], true);
    assert_eq!(json["kneading_iii"], true);

    // Grigorchuk is an automaton group but fails condition (i).
    let neg = selfsim(&["validate", data("specs/grigorchuk.grp").to_str().unwrap()]);
    assert_eq!(neg.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&neg)).unwrap();
    assert_eq!(json["kneading_i"], false);
    assert!(json["witnesses"]["kneading_i"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w["target"] == "a"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.grp");
    std::fs::write(&bad, "alphabet 2\ngen a = (0 2)\n").unwrap();
    let err = selfsim(&["validate", bad.to_str().unwrap()]);
    assert_eq!(err.status.code(), Some(2));
    assert!(!err.stderr.is_empty());
}

#[test]
fn img_reproduces_the_canonical_files() {
    for (portrait, spec) in [
        ("portraits/power.json", "specs/adding.grp"),
        ("portraits/basilica.json", "specs/basilica.grp"),
        ("portraits/chebyshev.json", "specs/chebyshev.grp"),
    ] {
        let out = selfsim(&["img", data(portrait).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{portrait}");
        let golden = std::fs::read_to_string(data(spec)).unwrap();
        assert_eq!(stdout(&out), golden, "{portrait} vs {spec}");
    }
}

#[test]
fn orbifold_reports() {
    let out = selfsim(&["orbifold", data("portraits/power.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["chi"], "0");
    assert_eq!(json["class"], "euclidean");
    assert_eq!(json["lr"], "HasLR");
    assert_eq!(json["orbit_type"], "periodic(1)");
    assert_eq!(json["exceptional"]["maximal"], serde_json::json!(["0", "inf"]));

    let out = selfsim(&["orbifold", data("portraits/basilica.json").to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["chi"], "-1");
    assert_eq!(json["class"], "hyperbolic");
    assert_eq!(json["lr"], "NotLR");
    assert_eq!(json["exceptional"]["finite"], serde_json::json!([]));

    let out = selfsim(&["orbifold", data("portraits/chebyshev.json").to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["chi"], "0");
    assert_eq!(json["orbit_type"], "preperiodic(2,1)");

    let out = selfsim(&["orbifold", data("portraits/zi.json").to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["chi"], "-1/2");
}

#[test]
fn word_verdicts_and_exit_codes() {
    let out = selfsim(&[
        "word",
        data("specs/chebyshev.grp").to_str().unwrap(),
        "--expr",
        "b^2",
        "--is-identity",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["is_identity"], true);

    let out = selfsim(&[
        "word",
        data("specs/basilica.grp").to_str().unwrap(),
        "--expr",
        "a",
        "--is-identity",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = selfsim(&[
        "word",
        data("specs/adding.grp").to_str().unwrap(),
        "--expr",
        "a",
        "--order-bound",
        "64",
        "--order-level",
        "8",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["order"]["at_least"], "256");

    let out = selfsim(&[
        "word",
        data("specs/grigorchuk.grp").to_str().unwrap(),
        "--expr",
        "a*d",
        "--order-bound",
        "64",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["order"]["finite"], 4);
}

#[test]
fn quotient_reports_and_resource_limits() {
    let out = selfsim(&[
        "quotient",
        data("specs/adding.grp").to_str().unwrap(),
        "--level",
        "3",
        "--order",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["order"], "8");

    let out = selfsim(&[
        "quotient",
        data("specs/basilica.grp").to_str().unwrap(),
        "--level",
        "10",
        "--transitive",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["transitive"], true);

    // Levels beyond --max-level exit with the resource code.
    let out = selfsim(&[
        "quotient",
        data("specs/adding.grp").to_str().unwrap(),
        "--level",
        "5",
        "--order",
        "--max-level",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = selfsim(&[
        "quotient",
        data("specs/grigorchuk.grp").to_str().unwrap(),
        "--level",
        "4",
        "--rist",
        "0",
        "--abelianization",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["abelianization"]["order"], "8");
    assert!(json["rist"]["order"].as_str().unwrap().parse::<u64>().unwrap() > 1);
}

#[test]
fn hdim_csv_rows() {
    let out = selfsim(&["hdim", data("specs/adding.grp").to_str().unwrap(), "--level", "6"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[2], "3, 3/7, 0.428571429");
    // Parallel computation gives byte-identical output.
    let par = selfsim(&[
        "hdim",
        data("specs/adding.grp").to_str().unwrap(),
        "--level",
        "6",
        "--threads",
        "3",
    ]);
    assert_eq!(out.stdout, par.stdout);
}

#[test]
fn check_is_deterministic_under_seed() {
    let spec = data("specs/basilica.grp");
    let args = [
        "check",
        spec.to_str().unwrap(),
        "--lemma",
        "rist-closure",
        "--level",
        "4",
        "--count",
        "5",
        "--seed",
        "42",
    ];
    let a = selfsim(&args);
    let b = selfsim(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let other_seed = selfsim(&[
        "check",
        spec.to_str().unwrap(),
        "--lemma",
        "rist-closure",
        "--level",
        "4",
        "--count",
        "5",
        "--seed",
        "43",
    ]);
    assert_eq!(other_seed.status.code(), Some(0));
    assert_ne!(a.stdout, other_seed.stdout, "different seeds sample differently");
}

#[test]
fn check_torsion_witness_passes() {
    let out = selfsim(&[
        "check",
        data("specs/grigorchuk.grp").to_str().unwrap(),
        "--lemma",
        "torsion-witness",
        "--level",
        "6",
        "--prime",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(json["assertions"].as_array().unwrap().iter().all(|a| a["pass"] == true));
    assert_eq!(json["witness"]["degenerate"], false);
    assert_eq!(json["tool"], "selfsim");
    assert_eq!(json["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn dot_outputs_are_stable() {
    let a = selfsim(&["dot", data("specs/basilica.grp").to_str().unwrap(), "--what", "automaton"]);
    let b = selfsim(&["dot", data("specs/basilica.grp").to_str().unwrap(), "--what", "automaton"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("digraph automaton {"));
    assert!(text.contains("a -> b [label=\"0|1\"];"));

    let c = selfsim(&["dot", data("specs/basilica.grp").to_str().unwrap(), "--what", "cycles"]);
    assert!(stdout(&c).contains("f0 -- l0;"));
}

#[test]
fn word_expression_errors_are_input_errors() {
    let out = selfsim(&[
        "word",
        data("specs/basilica.grp").to_str().unwrap(),
        "--expr",
        "q^2",
        "--is-identity",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
