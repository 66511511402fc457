use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gwverify::data::{embedded_files, DM_TABLE, ENV_DATA_DIR};

fn gwverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwverify"))
        .args(args)
        .env_remove(ENV_DATA_DIR)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn copy_data(dir: &Path) {
    for (rel, text) in embedded_files() {
        let path = dir.join(rel);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, text).unwrap();
    }
}

#[test]
fn psi_prints_the_value() {
    let o = gwverify(&["psi", "--g", "2", "--exponents", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("= 1/1152"), "{}", stdout(&o));
}

#[test]
fn expectation_mismatch_exits_one() {
    let o = gwverify(&["psi", "--g", "1", "--exponents", "1", "--expect", "1/12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(stdout(&o).ends_with("status: FAIL\n"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["psi", "--g", "2"][..],
        &["psi", "--g", "2", "--exponents", "4", "--expect", "1/0"],
        &["verify", "--example", "4"],
        &["chern", "--space", "Q4"],
        &["gw10", "--X", "P4", "--V", "1", "--insertion", "beta"],
        &["dim", "--n", "4", "--g", "1", "--c1a", "5", "--av", "3", "--contacts", "1,1"],
        &["localize", "--builtin", "no-such-diagram"],
        &["graphs", "--example", "2", "--delta", "0"],
        &["hodge", "--g", "5", "--psi", "12"],
        &["frobnicate"],
    ] {
        let o = gwverify(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn verify_example_three() {
    let o = gwverify(&["verify", "--example", "3", "--delta", "1"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    for v in ["-37/82944", "-97/193536", "4 * (1/72576)", "status: PASS"] {
        assert!(out.contains(v), "missing {v} in {out}");
    }
}

#[test]
fn verify_symbolic_examples() {
    for ex in ["1", "2", "3"] {
        let o = gwverify(&["verify", "--example", ex, "--symbolic"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let o = gwverify(&["verify", "--example", "2", "--symbolic"]);
    assert!(stdout(&o).contains("relative/delta! = -1/1152*d + 1/240"));
}

#[test]
fn thm1_verdicts() {
    let o = gwverify(&["thm1", "--n", "5", "--g", "7"]);
    assert!(stdout(&o).contains("verdict = guaranteed\n"));
    let o = gwverify(&["thm1", "--n", "4", "--g", "3", "--primary", "--A", "nonzero"]);
    assert!(stdout(&o).contains("example 3"));
    let o = gwverify(&["thm1", "--n", "3", "--g", "1", "--A", "zero"]);
    assert!(stdout(&o).contains("example 1"));
}

#[test]
fn gw10_hyperplane() {
    let o = gwverify(&["gw10", "--X", "P4", "--V", "1", "--insertion", "j"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.contains("absolute = 5/2"));
    assert!(out.contains("relative = 1/2"));
    assert!(out.contains("correction = 2"));
}

#[test]
fn graphs_counts() {
    let o = gwverify(&["graphs", "--example", "2", "--delta", "7"]);
    assert!(stdout(&o).contains("PASS surviving graphs: 8"));
    let o = gwverify(&["graphs", "--example", "3", "--delta", "4", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS surviving graphs: 2"));
}

#[test]
fn localize_weights() {
    let o = gwverify(&["localize", "--builtin", "p4-relative-delta1", "--eval", "3,7"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("PASS total from weights (3,7): -97/193536"));
    let o = gwverify(&["localize", "--builtin", "p4-absolute", "--expect", "-37/82944"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn localize_user_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m11.json");
    fs::write(
        &file,
        r#"{
  "schema": "gwverify.diagram/1",
  "label": "lambda on M(1,1) through one locus",
  "expected": "1/24",
  "loci": [
    {"label": "only", "base": ["M(1,1)"], "multiplicity": "a1", "insertion": "lam[0,1]",
     "obstruction": "1", "deformation": "a1", "source": "test"}
  ]
}"#,
    )
    .unwrap();
    let o = gwverify(&["localize", "--config", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("PASS total: 1/24"));

    fs::write(&file, r#"{"schema": "gwverify.diagram/1", "label": "x", "loci": [], "extra": 1}"#).unwrap();
    let o = gwverify(&["localize", "--config", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m11.json"), "{}", stderr(&o));
}

#[test]
fn json_reports_are_exact() {
    let o = gwverify(&["--json", "verify", "--example", "2", "--delta", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "PASS");
    let items = v["items"].as_array().unwrap();
    let rel = items.iter().find(|i| i["label"] == "relative/delta!").unwrap();
    assert_eq!(rel["value"], "-1/5760");
    for i in items {
        let value = i["value"].as_str().unwrap();
        assert!(!value.contains('.') || value.contains(' '), "non-rational value {value}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--example", "3", "--symbolic"];
    assert_eq!(gwverify(&args).stdout, gwverify(&args).stdout);
    let args = ["localize", "--builtin", "p4-absolute"];
    assert_eq!(gwverify(&args).stdout, gwverify(&args).stdout);
}

#[test]
fn selftest_passes_on_shipped_data() {
    let o = gwverify(&["selftest", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["items"].as_array().unwrap().len(), 12);
}

#[test]
fn data_dir_override_is_used() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let o = Command::new(env!("CARGO_BIN_EXE_gwverify"))
        .args(["hodge", "--g", "2", "--lambda", "1,1"])
        .env(ENV_DATA_DIR, dir.path())
        .output()
        .unwrap();
    assert!(stdout(&o).contains("1/5760"));

    let o = gwverify(&["--data-dir", "/nonexistent/gwverify", "verify", "--example", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("ERROR"));
}

#[test]
fn corrupted_table_is_an_error_with_location() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let table = dir.path().join(DM_TABLE);
    let text = fs::read_to_string(&table).unwrap();
    fs::write(&table, text.replacen("\"1/2880\"", "\"1/0\"", 1)).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gwverify"))
        .arg("selftest")
        .env(ENV_DATA_DIR, dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.starts_with("ERROR"), "{err}");
    assert!(err.contains("dm_intersections.json") && err.contains("entries[1]"), "{err}");
    assert!(stdout(&o).contains("status: ERROR"));
}
