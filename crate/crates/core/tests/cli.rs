use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenlattice")).args(args).env_remove("EIGENLATTICE_BUDGET").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn dowling_reports_closed_form() {
    let out = run(&["dowling", "--n", "4", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["mobius"], "105");
    assert_eq!(v["closed_form"]["formula"], "product");
    assert_eq!(v["closed_form"]["matches"], true);
}

#[test]
fn dowling_restricted_family_uses_series() {
    let v = json(&run(&["dowling", "--n", "4", "--r", "2", "--d", "2", "--k", "2", "--J", "0"]));
    assert_eq!(v["family"], "Q_4(2,2,2,{0})");
    assert_eq!(v["closed_form"]["formula"], "series-restricted");
    assert_eq!(v["closed_form"]["matches"], true);
}

#[test]
fn poset_flag_emits_elements() {
    let v = json(&run(&["dowling", "--n", "2", "--r", "2", "--poset"]));
    assert_eq!(v["poset"]["elements"].as_array().unwrap().len(), 6);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["shell-check", "--n", "4", "--r", "2", "--d", "2"]);
    let b = run(&["shell-check", "--n", "4", "--r", "2", "--d", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["outcome"], "certified");
}

#[test]
fn tiny_budget_is_inconclusive() {
    let out = run(&["--budget", "1", "shell-check", "--n", "3", "--r", "2", "--ordering", "search"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["outcome"], "inconclusive");
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_eigenlattice"))
        .args(["shell-check", "--n", "3", "--r", "2", "--ordering", "search"])
        .env("EIGENLATTICE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn invalid_input_exit_codes() {
    assert_eq!(run(&["dowling", "--n", "3", "--r", "3", "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["eigen", "--r", "3", "--p", "2", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["series", "mu-dde", "--r", "0", "--d", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn unsupported_exit_code() {
    let out = run(&["eigen", "--r", "2", "--p", "1", "--n", "2", "--exceptional", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["schema"], "v1");
}

#[test]
fn eigen_grid_passes() {
    let out = run(&["eigen", "--grid", "--rmax", "2", "--nmax", "3", "--mmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failed"], "0");
    assert_eq!(v["total"].as_str().unwrap().parse::<usize>().unwrap(), v["results"].as_array().unwrap().len());
}

#[test]
fn series_mu_dd0() {
    let v = json(&run(&["series", "mu-dd0", "--r", "1", "--d", "2", "--T", "3"]));
    assert_eq!(v["mu"][0], "0");
    assert_eq!(v["mu"][1], "-1");
}

#[test]
fn output_file_and_table() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("homology.txt");
    let out = run(&["homology", "--n", "3", "--r", "2", "--proper", "--format", "table", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("betti") && l.ends_with(r#"["0","0","15"]"#)));
}
