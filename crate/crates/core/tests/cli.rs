//! End-to-end checks of the `dopalg` binary: exit codes and report shape.

use std::process::Command;

fn dopalg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dopalg"))
}

#[test]
fn resolve_json_report_has_expected_sequence() {
    let out = dopalg()
        .args(["resolve", "--catalog", "killing", "--n", "4", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "resolve");
    let ranks: Vec<u64> = v["results"]["ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(ranks, vec![4, 10, 20, 20, 6, 0]);
    assert_eq!(v["results"]["euler"], 0);
    assert_eq!(v["results"]["terminated"], true);
}

#[test]
fn unknown_catalog_name_is_an_input_error() {
    let out = dopalg()
        .args(["adjoint", "--catalog", "no-such-system"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown catalog system"));
}

#[test]
fn exhausted_degree_budget_exits_with_code_two() {
    let out = dopalg()
        .args(["cc", "--catalog", "killing", "--n", "3", "--degree-cap", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = std::env::temp_dir().join("dopalg-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.dop");
    std::fs::write(&path, "vars x;\nunknowns u;\nsystem s {\n  eq: d[y] u;\n}\n").unwrap();
    let out = dopalg()
        .args(["cc", "--file", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at 4:"), "stderr was: {err}");
}

#[test]
fn param_specialization_changes_the_ext_answer() {
    for (c, want) in [("0", "ext^1 != 0"), ("1", "ext^1 != 0")] {
        let out = dopalg()
            .args(["ext", "--catalog", "vessiot", "--param", &format!("c={c}"), "--i", "1"])
            .output()
            .unwrap();
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).contains(want));
    }
    let out = dopalg()
        .args(["ext", "--catalog", "vessiot", "--param", "c=1", "--i", "2"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("ext^2 = 0"));
    let out = dopalg()
        .args(["ext", "--catalog", "vessiot", "--param", "c=0", "--i", "2"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("ext^2 != 0"));
}
