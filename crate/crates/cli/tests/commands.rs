use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contraction"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value, String) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let stdout = String::from_utf8(out.stdout).expect("utf8");
    assert!(stdout.ends_with('\n'), "output not newline-terminated: {stdout:?}");
    let v = serde_json::from_str(&stdout).expect("json output");
    (out.status.code().expect("exit code"), v, stdout)
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf8 path")
}

#[test]
fn residue_of_dlog() {
    let f = fixture("dlog.json");
    let (code, v, raw) = run_json(&["residue", path(&f)]);
    assert_eq!(code, 0);
    assert_eq!(raw, "{\"residue\":\"1\"}\n");
    assert_eq!(v["residue"], "1");
}

#[test]
fn residue_invariance_check() {
    let f = fixture("dlog.json");
    let (code, v, _) = run_json(&["residue", path(&f), "--check-invariance", "100", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
    assert_eq!(v["trials"], 100);
}

#[test]
fn insufficient_precision_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("short.json");
    std::fs::write(
        &f,
        r#"{"version": 1, "ring": {"field": "Q", "vars": ["u"], "ideal": [[2]]},
            "differential": {"coeffs": {"-3": {"0": "1"}}, "prec": -2}}"#,
    )
    .unwrap();
    let out = run(&["residue", path(&f)]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("insufficient precision"), "{err}");
}

#[test]
fn malformed_json_exits_2_with_position() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"version\": 1,\n \"ring\": [").unwrap();
    let out = run(&["residue", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn unknown_fields_and_versions_are_rejected() {
    let dir = TempDir::new().unwrap();
    let extra = dir.path().join("extra.json");
    let text = std::fs::read_to_string(fixture("dlog.json")).unwrap();
    std::fs::write(&extra, text.replacen("{", "{\"colour\": 3,", 1)).unwrap();
    assert_eq!(run(&["residue", path(&extra)]).status.code(), Some(2));
    let old = dir.path().join("old.json");
    std::fs::write(&old, text.replace("\"version\": 1", "\"version\": 0")).unwrap();
    assert_eq!(run(&["residue", path(&old)]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    assert_eq!(run(&["ring", "/nonexistent/ring.json"]).status.code(), Some(2));
}

#[test]
fn ring_description() {
    let (code, v, _) = run_json(&["ring", path(&fixture("tacnode.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["nilpotency_bound"], 3);
    assert_eq!(v["basis"], serde_json::json!(["1", "u", "u^2"]));
    assert_eq!(v["tower_dims"], serde_json::json!([1, 2, 3]));
}

#[test]
fn layers_of_two_step_tree() {
    let (code, v, _) = run_json(&["layers", path(&fixture("layers1.json")), "--vertex", "2"]);
    assert_eq!(code, 0);
    let layers: Vec<Value> = v["layers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["vertices"].clone())
        .collect();
    assert_eq!(
        layers,
        vec![
            serde_json::json!([0]),
            serde_json::json!([1]),
            serde_json::json!([2, 3])
        ]
    );
    assert_eq!(v["parameters"], serde_json::json!(["t1", "t2"]));
    assert_eq!(v["product"], "t1*t2");
}

#[test]
fn incomparable_radii_report_the_pair() {
    let (code, v, _) = run_json(&["align", path(&fixture("incomparable.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["aligned"], false);
    assert_eq!(v["incomparable"].as_array().unwrap().len(), 2);
}

#[test]
fn wrong_genus_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("g0.json");
    std::fs::write(
        &f,
        r#"{"monoid_rank": 1, "vertices": [{"id": 0, "genus": 0}, {"id": 1, "genus": 0}],
            "edges": [{"ends": [0, 1], "length": [1]}]}"#,
    )
    .unwrap();
    let out = run(&["align", path(&f), "--vertex", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn semistable_subdivision_and_dot() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("out.dot");
    let (code, v, _) = run_json(&[
        "subdivide",
        path(&fixture("semistable.json")),
        "--vertex",
        "1",
        "--dot",
        path(&dot),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["inserted"], 1);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("style=dashed").count(), 1, "{text}");

    // same emission twice is byte-identical
    let again = dir.path().join("again.dot");
    run(&[
        "subdivide",
        path(&fixture("semistable.json")),
        "--vertex",
        "1",
        "--dot",
        path(&again),
    ]);
    assert_eq!(text, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn tacnode_membership() {
    let s = fixture("tacnode.json");
    let (code, v, raw) = run_json(&["contract", path(&s), path(&fixture("tacnode_member.json"))]);
    assert_eq!((code, raw.as_str()), (0, "{\"member\":true}\n"));
    assert_eq!(v["member"], true);

    let (code, v, _) = run_json(&["contract", path(&s), path(&fixture("tacnode_nonmember.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["member"], false);
    assert!(v["payload"].is_string());
}

#[test]
fn lift_to_top_and_recheck() {
    let dir = TempDir::new().unwrap();
    let s = fixture("tacnode.json");
    let (code, v, _) = run_json(&["lift", path(&s), path(&fixture("tacnode_k.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["lifted"], true);
    assert_eq!(v["level"], 2);
    let lifted = dir.path().join("lifted.json");
    std::fs::write(&lifted, v["jet"].to_string()).unwrap();
    let (code, v, _) = run_json(&["contract", path(&s), path(&lifted)]);
    assert_eq!(code, 0);
    assert_eq!(v["member"], true);
}

#[test]
fn lift_of_nonmember_is_obstructed() {
    let s = fixture("tacnode.json");
    let dir = TempDir::new().unwrap();
    let jet = dir.path().join("bad_k.json");
    let text = std::fs::read_to_string(fixture("tacnode_k.json")).unwrap();
    std::fs::write(&jet, text.replace("{\"0\": \"2\"}]}\n", "{\"0\": \"3\"}]}\n")).unwrap();
    let (code, v, _) = run_json(&["lift", path(&s), path(&jet)]);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["lifted"], false);
    assert_eq!(v["level"], 0);
}

#[test]
fn tacnode_singularity_golden() {
    let (code, _, raw) = run_json(&["singularity", path(&fixture("tacnode.json"))]);
    assert_eq!(code, 0);
    assert_eq!(
        raw,
        "{\"class\":\"tacnode\",\"delta\":2,\"genus\":1,\"jet_order\":2,\"m\":2,\"model\":\"V(y^2 - y x^2)\"}\n"
    );
}

#[test]
fn selftest_single_criterion() {
    let (code, v, _) = run_json(&["selftest", "--only", "10", "--seed", "42"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"][0]["id"], 10);
}

#[test]
fn selftest_is_deterministic_under_seed() {
    let strip = |v: Value| -> Vec<(Value, Value)> {
        v["results"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| (r["checks"].clone(), r["failure"].clone()))
            .collect()
    };
    let (_, a, _) = run_json(&["selftest", "--only", "5", "--seed", "3"]);
    let (_, b, _) = run_json(&["selftest", "--only", "5", "--seed", "3"]);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn selftest_reports_corrupted_chart() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("zero_lead.json");
    let text = std::fs::read_to_string(fixture("tacnode.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut v = v;
    v["charts"][0]["coeffs"][0] = serde_json::json!({});
    std::fs::write(&bad, v.to_string()).unwrap();
    let (code, v, _) = run_json(&["selftest", "--only", "10", "--scenario", path(&bad)]);
    assert_eq!(code, 1);
    let row = &v["results"][0];
    assert_eq!(row["passed"], false);
    assert!(row["failure"].as_str().unwrap().contains("chart invariant"), "{row}");
}
