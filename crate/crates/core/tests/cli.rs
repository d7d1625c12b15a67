use std::process::{Command, Output};

use serde_json::Value;

fn heyting(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heyting"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn prove_exit_codes() {
    assert_eq!(heyting(&["prove", "p & q |- q"]).status.code(), Some(0));
    assert_eq!(heyting(&["prove", "|- p | ~p"]).status.code(), Some(1));
    assert_eq!(heyting(&["prove", "p & |- q"]).status.code(), Some(2));
    assert_eq!(heyting(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn countermodel_is_valid_json_model() {
    let o = heyting(&[
        "--format",
        "json",
        "countermodel",
        "|- ((p -> q) -> p) -> p",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let model = &v["model"];
    assert!(model["nodes"].as_array().unwrap().len() >= 2);
    assert!(model["order"].is_array());
}

#[test]
fn degree_and_space_sizes() {
    assert_eq!(
        stdout(&heyting(&["degree", "((p -> q) -> p) -> p"])).trim(),
        "3"
    );
    let v = json(&heyting(&[
        "--format", "json", "space", "--vars", "p", "--level", "1",
    ]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 3);
    let v = json(&heyting(&[
        "--format", "json", "rn", "--vars", "q,p", "--level", "0",
    ]));
    assert_eq!(v["size"], 4);
    assert_eq!(v["r_bound"], 7);
    let dot = stdout(&heyting(&[
        "--format", "dot", "space", "--vars", "p", "--level", "1",
    ]));
    assert!(dot.starts_with("digraph"));
}

#[test]
fn interp_prints_interpolants() {
    let o = heyting(&["interp", "exists", "p", "q & p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("q"));
    let o = heyting(&["interp", "forall", "p", "q -> p"]);
    assert_eq!(stdout(&o).lines().next(), Some("~q"));
}

#[test]
fn interp_certificate_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let o = heyting(&[
        "interp",
        "exists",
        "p",
        "q & p",
        "--cert",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert["result"], "q");
    assert_eq!(cert["level_used"], 7);
    assert!(heyting_core::interp::check_certificate(&cert).unwrap() > 0);
}

#[test]
fn interp_is_deterministic() {
    let args = [
        "--format",
        "json",
        "interp",
        "exists",
        "p",
        "(q -> p) & (p -> r)",
        "--seed",
        "3",
    ];
    assert_eq!(stdout(&heyting(&args)), stdout(&heyting(&args)));
}

#[test]
fn craig_and_witness_check() {
    let o = heyting(&["craig", "p & q", "q | r"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "q");
    assert_eq!(heyting(&["craig", "p", "q"]).status.code(), Some(1));
    let o = heyting(&["--format", "json", "witness-check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn oracle_consequence_matches_prover() {
    assert_eq!(
        heyting(&["oracle", "consequence", "p |- ~~p"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        heyting(&["oracle", "consequence", "~~p |- p"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn dist_and_classes() {
    let o = heyting(&["dist", "--vars", "p", "--level", "2", "x0", "x1"]);
    assert_eq!(stdout(&o).trim(), "2^-1");
    let o = heyting(&[
        "--format", "json", "classes", "p", "--vars", "p", "--level", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn resource_errors_exit_two() {
    let o = heyting(&["space", "--vars", "p,q", "--level", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}
