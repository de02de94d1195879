//! The `ua` binary: exit codes, file inputs, reports and the cache.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ua(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ua")).args(args).output().expect("ua runs")
}

fn code(args: &[&str]) -> i32 {
    ua(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_slice(&ua(&all).stdout).expect("json report")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ua-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(code(&["functional", "--class", "gallery:lukasiewicz(2)", "--formula", "2.y = 1 & y * (1.y) = 0", "--inputs", "x", "--out", "y"]), 0);
    assert_eq!(code(&["primal", "gallery:lukasiewicz(2)"]), 1);
    assert_eq!(code(&["term-search", "--class", "gallery:lukasiewicz(2)", "--condition", "majority", "--budget", "elements=100"]), 2);
    assert_eq!(code(&["no-such-command"]), 3);
    assert_eq!(code(&["primal", "gallery:lukasiewicz(2)", "--route", "sideways"]), 3);
    assert_eq!(code(&["validate", "/definitely/not/here.json"]), 4);
    assert_eq!(code(&["primal", "gallery:nosuch(3)"]), 4);
    assert_eq!(code(&["--help"]), 0);
    let out = ua(&["validate", "/definitely/not/here.json"]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    assert!(out.stdout.is_empty());
}

#[test]
fn primal_reports_the_proper_subuniverse() {
    let r = json(&["primal", "gallery:lukasiewicz(2)"]);
    assert_eq!(r["verdict"], "refuted");
    assert_eq!(r["exit_code"], 1);
    assert_eq!(r["result"]["counterexample"]["ProperSubuniverse"], serde_json::json!([0, 2]));
}

#[test]
fn c5_dominion_is_not_closed() {
    let args = ["dominion", "--class", "gallery:chain_heyting(5)", "--big", "gallery:power(chain_heyting(5),2)", "--sub", "0,7,18,24"];
    let r = json(&args);
    assert_eq!(r["verdict"], "ok");
    let extra: Vec<u64> = r["result"]["extra"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert!(extra.contains(&23));
    let mut closed = args.to_vec();
    closed.push("--expect-closed");
    assert_eq!(code(&closed), 1);
}

#[test]
fn algebra_and_formula_files() {
    let dir = scratch("files");
    let alg = dir.join("semilattice.json");
    std::fs::write(&alg, r#"{"name": "S", "size": 2, "operations": {"*": {"arity": 2, "table": [[0, 0], [0, 1]]}, "1": {"arity": 0, "table": 1}}}"#).unwrap();
    let f = dir.join("comm.txt");
    std::fs::write(&f, "x * y = y * x\n").unwrap();
    let (a, f) = (alg.to_str().unwrap(), f.to_str().unwrap());
    assert_eq!(code(&["validate", a]), 0);
    assert_eq!(code(&["eval", "--algebra", a, "--formula", f]), 0);
    assert_eq!(code(&["eval", "--algebra", a, "--formula", "x * y = x"]), 1);
    assert_eq!(code(&["eval", "--algebra", a, "--formula", "x * y = x", "--assign", "x=0,y=1"]), 0);
    std::fs::write(&alg, r#"{"name": "S", "size": 2, "operations": {"*": {"arity": 2, "table": [[0, 2], [0, 1]]}}}"#).unwrap();
    assert_eq!(code(&["validate", a]), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_stable_and_cached() {
    let dir = scratch("cache");
    let cache = dir.join("cache");
    let report = dir.join("report.json");
    let args = ["--format", "json", "conlat", "gallery:chain_heyting(4)"];
    let cold = ua(&[&args[..], &["--cache", cache.to_str().unwrap(), "--report", report.to_str().unwrap()]].concat());
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(std::fs::read(&report).unwrap(), cold.stdout);
    let warm = ua(&[&args[..], &["--cache", cache.to_str().unwrap()]].concat());
    assert_eq!(warm.stdout, cold.stdout);
    assert_eq!(ua(&[&args[..], &["--jobs", "3"]].concat()).stdout, cold.stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let timed: Value = serde_json::from_slice(&ua(&[&args[..], &["--timing"]].concat()).stdout).unwrap();
    assert!(timed["wall_ms"].is_u64());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn expand_emits_generator_files() {
    let dir = scratch("emit");
    let out = dir.join("out");
    let c = code(&["expand", "--class", "gallery:d2_bdl", "--define", "~=gallery:complement", "--emit", out.to_str().unwrap()]);
    assert_eq!(c, 0);
    let axioms = std::fs::read_to_string(out.join("axioms.txt")).unwrap();
    assert!(axioms.contains('~'));
    let files: Vec<String> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert!(files.iter().any(|f| f.ends_with(".json")));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn repro_lists_and_runs() {
    let list = String::from_utf8(ua(&["repro", "--list"]).stdout).unwrap();
    for id in ["boolean-expansion", "c5-gadget", "property-suites"] {
        assert!(list.contains(id));
    }
    assert_eq!(code(&["repro", "finite-fields"]), 0);
    assert_eq!(code(&["repro", "nope"]), 4);
}
