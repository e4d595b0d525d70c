use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clforms"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn qr_sweep_on_sp2() {
    let out = run(&["verify", "--suite", "qr", "--field", "3", "--kind", "sp", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["instances"], 243);
    assert_eq!(r["result"]["failures"].as_array().unwrap().len(), 0);
    assert_eq!(r["seed"], 0);
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn classify_sp2_nilpotent() {
    let out = run(&["classify", "--input", path_str(&fixture("sp2_nilp.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let blocks = report(&out)["result"]["blocks"].as_array().unwrap().clone();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["variant"], "NonSplit");
    assert_eq!(blocks[0]["d"], 2);
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let mut inst: Value = serde_json::from_str(&fs::read_to_string(fixture("sp2_nilp.json")).unwrap()).unwrap();
    inst["operator"] = serde_json::json!([[[1, 0], [0, 0]], [[0, 0], [0, 0]]]);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, inst.to_string()).unwrap();
    let out = run(&["classify", "--input", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("operator fails A* = −A"));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"schema_version\": 1,").unwrap();
    let out = run(&["witness", "--input", path_str(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));

    let out = run(&["shadow", "--kind", "o", "--dim", "4", "--field", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget exceeded"));

    let out = run(&["verify", "--suite", "nope", "--field", "3", "--kind", "o", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixtures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = run(&["--seed", "42", "fixtures", "--out", path_str(d.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 50);
    for n in &names {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap());
    }

    let even = a.path().join("o4_even_nilpotent_d2.json");
    let r = report(&run(&["classify", "--input", path_str(&even)]));
    let blocks = r["result"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["variant"], "EvenNilpotentO");
    assert_eq!(blocks[0]["d"], 2);

    let out = run(&["descend", "--input", path_str(&a.path().join("sp2_descent.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let h = &report(&out)["result"]["hermitian"];
    assert_eq!(h["group"], "U");
    assert_eq!(h["gram"].as_array().unwrap().len(), 1);
}

#[test]
fn every_fixture_classifies_and_has_a_witness() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let out = run(&["witness", "--input", path_str(&p)]);
        assert_eq!(out.status.code(), Some(0), "{}", p.display());
        let w = &report(&out)["result"];
        assert_eq!(w["delta"], -1);
        assert_eq!(w["reverses_operator"], true);
        assert_eq!(w["twisting_law"], true);
    }
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for (i, extra) in [[].as_slice(), ["--sequential"].as_slice()].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let mut args = vec!["--seed", "7", "--output", path_str(&path)];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["verify", "--suite", "rho", "--field", "5", "--kind", "o", "--dim", "3", "--trials", "20"]);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        texts.push(fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn shadow_exit_codes() {
    let out = run(&["shadow", "--kind", "o", "--dim", "2", "--field", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["header"].as_str().unwrap().contains("finite-field"));

    let out = run(&["shadow", "--kind", "o", "--dim", "1", "--field", "3", "--pair"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["big_order"], 4);

    // the ±1 eigenlines of a split element are swapped by every reversing element
    let out = run(&["shadow", "--kind", "sp", "--dim", "2", "--field", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let unstable = report(&out)["result"][0]["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| o["twisted_stable"] == false)
        .count();
    assert_eq!(unstable, 2);
}
