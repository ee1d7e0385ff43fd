use std::path::PathBuf;
use std::process::Command;

use hopfzero::frontend::run_cli;
use serde_json::Value;
use tempfile::TempDir;

const FAMILY37: &str = "params a001, b200, c030
dx = -2*y + a001*z
dy = 2*x + b200*x^2
dz = x^2 + y^2 + c030*y^3
";

const FAMILY38: &str = "params a001, c011, c101
dx = -2*y + a001*z
dy = 2*x
dz = x^2 + y^2 + c101*x*z + c011*y*z
";

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> hopfzero::frontend::CliOutput {
    run_cli(std::iter::once("hopfzero").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn normal_form_family38_prints_leading_coefficients() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "family38.hz", FAMILY38);
    let out = run(&["normal-form", &f, "--max-degree", "2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("a_1 = -1/4*a001^2 - 1/4*a001*c011"), "{}", out.stdout);
    assert!(out.stdout.contains("b_1 = 1/4*a001^2 + 1/2*a001*c011"));
    assert!(out.stdout.contains("a_2 = "));

    let v = json(&["normal-form", &f, "--max-degree", "2", "--json"]);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["normal_form"]["max_index"], 2);
    assert_eq!(v["resonance"]["l0"], 1);
    assert_eq!(v["parameters"], serde_json::json!(["a001", "c011", "c101"]));
}

#[test]
fn analyze_numeric_family37_is_obstructed() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "family37.hz", FAMILY37);
    let v = json(&[
        "analyze", &f, "--param", "a001=1", "--param", "b200=2", "--param", "c030=3",
        "--max-degree", "8", "--json",
    ]);
    let c = &v["classification"];
    assert_eq!(c["verdict"], "NOT_INTEGRABLE(JACOBI_H2, 7)");
    assert_eq!(c["case"], "b3");
    assert_eq!(c["witness_degree"], 14);
    assert_eq!(v["obstructions"]["entries"]["7"], "5/6144");
}

#[test]
fn analyze_integrable_stratum_at_default_degree() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "family37.hz", FAMILY37);
    let v = json(&[
        "analyze", &f, "--param", "a001=0", "--param", "b200=1", "--param", "c030=0", "--json",
    ]);
    assert_eq!(v["classification"]["verdict"], "NO_OBSTRUCTION_UP_TO(30)");
    assert_eq!(v["classification"]["case"], "a");
}

#[test]
fn symbolic_obstructions_with_constraint() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "family37.hz", FAMILY37);
    let v = json(&[
        "obstructions", &f, "--mode", "jacobi-h2", "--max-degree", "9",
        "--constraint", "18*a001^2 - 18*a001*b200 + 5*b200^2", "--eliminate", "a001", "--json",
    ]);
    for k in ["7", "8", "9"] {
        assert_eq!(v["obstructions"]["entries"][k], "0", "{k}");
    }
    assert_eq!(v["constraint"]["eliminate"], "a001");
}

#[test]
fn principal_part_is_rescaled() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "scaled.hz", "dx = -y\ndy = x\ndz = 3*x^2 + 3*y^2\n");
    let v = json(&["analyze", &f, "--max-degree", "3", "--json"]);
    assert_eq!(v["scalings_applied"]["time"], "2");
    assert_eq!(v["scalings_applied"]["z"], "6");
    assert_eq!(v["classification"]["verdict"], "NF_LINEARIZABLE");
}

#[test]
fn reduce_prints_planar_field() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "family38.hz", FAMILY38);
    let out = run(&["reduce", &f, "--max-degree", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("du = ") && out.stdout.contains("dv = "));
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let missing = d.path().join("missingfile.hz");
    let out = run(&["analyze", missing.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("cannot read"));

    let f = write(&d, "family38.hz", FAMILY38);
    assert_eq!(run(&["analyze", &f, "--frobnicate"]).code, 2);
    assert_eq!(run(&["analyze", &f, "--max-degree", "0"]).code, 2);
    let out = run(&["analyze", &f, "--param", "w=1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains('w'));

    let bad = write(&d, "bad.hz", "dx = -2*y/x\ndy = 2*x\ndz = x^2 + y^2\n");
    let out = run(&["analyze", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1"), "{}", out.stderr);

    let degenerate = write(&d, "deg.hz", "dx = -2*y\ndy = 2*x\ndz = x*y\n");
    let out = run(&["analyze", &degenerate, "--max-degree", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("dz: x*y"), "{}", out.stderr);
}

#[test]
fn binary_matches_in_process_run() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "family38.hz", FAMILY38);
    let args = ["obstructions", f.as_str(), "--mode", "jacobi-h", "--max-degree", "4"];
    let out = Command::new(env!("CARGO_BIN_EXE_hopfzero")).args(args).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run(&args).stdout);

    let out = Command::new(env!("CARGO_BIN_EXE_hopfzero")).arg("analyze").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
