use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn troforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_troforge")).args(args).env_remove("TROFORGE_SEED").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn export(args: &[&str]) -> Value {
    let mut full = vec!["export"];
    full.extend_from_slice(args);
    let out = troforge(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    stdout_json(&out)
}

#[test]
fn spin_envelope_report() {
    let out = troforge(&["envelope", "--family", "IV", "--dim", "5"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["spec"], "IV(dim=5)");
    assert_eq!(v["envelope_dim"], 16);
    assert_eq!(v["blocks"], json!([[4, 4]]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["rank_tol"], 1e-9);
}

#[test]
fn type1_and_exceptional_envelopes() {
    let v = stdout_json(&troforge(&["envelope", "--family", "I", "--n", "2", "--m", "3"]));
    assert_eq!(v["envelope_dim"], 12);
    assert_eq!(v["blocks"], json!([[2, 3], [3, 2]]));
    let v = stdout_json(&troforge(&["envelope", "--family", "VI"]));
    assert_eq!(v["factor_dim"], 27);
    assert_eq!(v["envelope_dim"], 0);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["envelope", "--family", "II", "--n", "4"],
        vec!["envelope", "--family", "I", "--n", "2"],
        vec!["envelope", "--family", "IV", "--dim", "40"],
        vec!["envelope", "--family", "III", "--n", "9"],
        vec!["closure", "--file", "/nonexistent/generators.json"],
    ] {
        let out = troforge(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn reassigned_factor_names_its_replacement() {
    let out = troforge(&["envelope", "--family", "II", "--n", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1, 3)"));
}

#[test]
fn builtin_and_exported_grids_verify() {
    let out = troforge(&["verify-grid", "--kind", "symplectic", "--n", "5", "--builtin"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["passed"], true);

    let dir = TempDir::new().unwrap();
    let grid = export(&["--kind", "rectangular", "--n", "2", "--m", "3"]);
    let path = write(&dir, "grid.json", &grid);
    let v = stdout_json(&troforge(&["verify-grid", "--file", &path]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["max_residual"], 0.0);
}

#[test]
fn corrupted_grid_names_the_axiom() {
    let dir = TempDir::new().unwrap();
    let mut grid = export(&["--kind", "symplectic", "--n", "5"]);
    let u12 = grid["elements"]["1,2"].clone();
    grid["elements"]["2,1"] = u12;
    let path = write(&dir, "bad.json", &grid);
    let out = troforge(&["verify-grid", "--file", &path]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["violations"][0]["axiom"], "SYG1");

    let md = troforge(&["--format", "markdown", "verify-grid", "--file", &path]);
    assert!(String::from_utf8_lossy(&md.stdout).contains("SYG1 at (1,2)"));
}

#[test]
fn scaled_grid_element_breaks_tripotency() {
    let dir = TempDir::new().unwrap();
    let mut grid = export(&["--kind", "hermitian", "--n", "3"]);
    for entry in grid["elements"]["2,2"]["blocks"][0]["data"].as_array_mut().unwrap() {
        for part in entry.as_array_mut().unwrap() {
            *part = json!(part.as_f64().unwrap() * 2.0);
        }
    }
    let out = troforge(&["verify-grid", "--file", &write(&dir, "scaled.json", &grid)]);
    assert_eq!(code(&out), 1);
    let axioms: Vec<Value> = stdout_json(&out)["violations"].as_array().unwrap().iter().map(|v| v["axiom"].clone()).collect();
    assert!(axioms.contains(&json!("TRIPOTENT")));
}

#[test]
fn malformed_grid_file_exits_2() {
    let dir = TempDir::new().unwrap();
    for v in [json!({"kind": "hermitian", "params": {"n": 2}, "elements": {}}), json!({"kind": "octonion"})] {
        let out = troforge(&["verify-grid", "--file", &write(&dir, "g.json", &v)]);
        assert_eq!(code(&out), 2, "{v}");
    }
}

#[test]
fn closure_of_exported_generators() {
    let dir = TempDir::new().unwrap();
    let gens = export(&["--kind", "spin", "--n", "4", "--generators"]);
    let v = stdout_json(&troforge(&["closure", "--file", &write(&dir, "spin.json", &gens)]));
    assert_eq!(v["dim"], 16);
    assert_eq!(v["blocks"], json!([[4, 4]]));
    assert_eq!(v["universal"], true);

    let gens = export(&["--kind", "hkn", "--n", "3", "--k", "2", "--generators"]);
    let v = stdout_json(&troforge(&["closure", "--file", &write(&dir, "h32.json", &gens)]));
    assert_eq!(v["dim"], 9);
}

#[test]
fn radical_of_patterns() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", &json!({"pattern": [[2, 2], [1, 1], [1, 1]]}));
    let out = troforge(&["radical", "--file", &p]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["radical_dim"], 4);
    assert_eq!(v["abelian_dim"], 2);
    assert_eq!(v["sequence"]["left"], 8);
    assert_eq!(v["sequence"]["right"], 2);
    assert_eq!(v["sequence"]["middle"], 10);
    assert_eq!(v["sequence"]["middle_closure"], 10);
    assert_eq!(v["sequence"]["exact"], true);

    let hilbert = write(&dir, "h.json", &json!({"pattern": [[2, 2], [1, 3]]}));
    assert_eq!(code(&troforge(&["radical", "--file", &hilbert])), 2);
    let empty = write(&dir, "e.json", &json!({"pattern": []}));
    assert_eq!(code(&troforge(&["radical", "--file", &empty])), 2);
    let junk = write(&dir, "j.json", &json!({"blocks": 3}));
    assert_eq!(code(&troforge(&["radical", "--file", &junk])), 2);
}

#[test]
fn output_is_byte_stable() {
    let args = ["envelope", "--family", "I", "--n", "1", "--m", "3"];
    let a = troforge(&args);
    let b = troforge(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let v = stdout_json(&troforge(&["--seed", "7", "envelope", "--family", "III", "--n", "3"]));
    assert_eq!(v["seed"], 7);
    let bin = env!("CARGO_BIN_EXE_troforge");
    let out = Command::new(bin).args(["envelope", "--family", "III", "--n", "3"]).env("TROFORGE_SEED", "11").output().unwrap();
    assert_eq!(stdout_json(&out)["seed"], 11);
    let out = Command::new(bin).args(["envelope", "--family", "III", "--n", "3"]).env("TROFORGE_SEED", "x").output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn markdown_tables() {
    let out = troforge(&["--format", "markdown", "envelope", "--family", "IV", "--dim", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("## IV(dim=4)"));
    assert!(text.contains("| 4 | 8 | M_2,2 + M_2,2 | M_2,2 + M_2,2 |"));
}

#[test]
fn small_sweep_passes() {
    let out = troforge(&["sweep", "--max-spin-k", "4", "--max-type1-nm", "6", "--max-type23-n", "5", "--max-rank1-n", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    let specs: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["spec"].as_str().unwrap()).collect();
    assert!(specs.contains(&"IV(dim=5)") && specs.contains(&"I(1,3)") && specs.contains(&"VI"));
}

#[test]
fn help_lists_subcommands() {
    let out = troforge(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["envelope", "verify-grid", "closure", "sweep", "radical", "export"] {
        assert!(text.contains(cmd), "{cmd}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_troforge")).exists());
}
