use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const FIRST: &str = "(x/2 + y^2, y/3 + y^3)";
const SECOND: &str = "(x/2 - y^3, y/2 + x^3)";
const HOLDS: &str = "(x/2, y/3 + x^2)";

fn dmy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmy")).args(args).output().unwrap()
}

fn dmy_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dmy"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn scratch(name: &str, content: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn exit_codes() {
    assert_eq!(dmy(&["analyze", HOLDS]).status.code(), Some(0));
    assert_eq!(dmy(&["--help"]).status.code(), Some(0));
    assert_eq!(dmy(&["--version"]).status.code(), Some(0));

    let bad = dmy(&["analyze", "(x^, y)"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("at byte"), "{}", stderr(&bad));

    for args in [
        &["analyze"][..],
        &["frobnicate", HOLDS],
        &["analyze", HOLDS, "--format", "xml"],
        &["analyze", "no-such-file.txt"],
        &["orbits", HOLDS, "--grid-step", "0"],
        &["orbits", HOLDS, "--max-iter", "0"],
        &["jury", HOLDS],
        &["jury", HOLDS, "--point", "1;2"],
        &["analyze", "(x^4, y)", "--degree-cap", "3"],
        &["analyze", "(x/(y+1), y)"],
    ] {
        let o = dmy(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn json_schemas() {
    let v = &json_lines(&dmy(&["analyze", FIRST, "--format", "json"]))[0];
    assert_eq!(v["status"], "HypothesesFail");
    assert_eq!(v["certificate"]["kind"], "NonProportional");
    assert!(v["witness"]["spectral_radius"].as_f64().unwrap() >= 10.0 / 3.0 - 0.01);
    assert_eq!(v["witness"]["certified"], true);
    assert!(v["version"].is_string());
    assert!(v["notes"].is_array());

    let v = &json_lines(&dmy(&["symmetry", SECOND, "--format", "json"]))[0];
    assert_eq!(v["classification"], "Zn");
    assert_eq!(v["n"], 4);
    assert_eq!(v["reflection_axes"], serde_json::json!([]));

    let v = &json_lines(&dmy(&["analyze", HOLDS, "--format", "json"]))[0];
    assert_eq!(v["status"], "HypothesesHold");
    let cert = &v["certificate"];
    assert_eq!(cert["kind"], "NormalFormPositive");
    assert_eq!(cert["spectral"]["t"], serde_json::json!([[0, "5/6"]]));
    assert_eq!(cert["spectral"]["d"], serde_json::json!([[0, "1/6"]]));
    assert_eq!(cert["positive_polynomials"].as_array().unwrap().len(), 3);

    let v = &json_lines(&dmy(&["normal-form", HOLDS, "--format", "json"]))[0];
    assert_eq!(v["ok"], true);
    for key in ["B", "a", "b", "alpha", "beta", "p"] {
        assert!(!v["normal_form"][key].is_null(), "{key}");
    }
    let v = &json_lines(&dmy(&["normal-form", FIRST, "--format", "json"]))[0];
    assert_eq!(v["ok"], false);
    assert_eq!(v["failure"]["reason"], "NonProportional");

    let v = &json_lines(&dmy(&["jury", FIRST, "--point", "0,1", "--format", "json"]))[0];
    assert_eq!(
        (&v["inside"], &v["trace"], &v["det"]),
        (&Value::Bool(false), &"23/6".into(), &"5/3".into())
    );

    let v = &json_lines(&dmy(&["orbits", HOLDS, "--format", "json"]))[0];
    assert_eq!(v["total"], 1681);
    assert_eq!(v["counts"]["Converged"], 1681);
    assert_eq!(v["grid"]["points_per_axis"], 41);

    let v = &json_lines(&dmy(&["orbits", HOLDS, "--point", "3,-2", "--format", "json"]))[0];
    assert_eq!(v["outcome"], "Converged");

    let v = &json_lines(&dmy(&["witness", HOLDS, "--format", "json", "--max-extent", "32"]))[0];
    assert_eq!(v["status"], "Undecided");
}

#[test]
fn text_output() {
    assert_eq!(stdout(&dmy(&["symmetry", SECOND])).lines().next(), Some("Z4"));
    assert_eq!(
        stdout(&dmy(&["jury", FIRST, "--point", "0,1"])),
        "inside=false trace=23/6 det=5/3\n"
    );
    let text = stdout(&dmy(&["analyze", FIRST]));
    assert!(text.contains("status: HypothesesFail"), "{text}");
    assert!(text.contains("NonProportional"), "{text}");
    assert!(text.contains("dmy jury"), "{text}");
}

#[test]
fn batch_input() {
    let file = scratch("batch.txt", &format!("# fixtures\n{FIRST}\n\n{SECOND}\n{HOLDS}\n"));
    let o = dmy(&["analyze", file.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let statuses: Vec<Value> = json_lines(&o).iter().map(|v| v["status"].clone()).collect();
    assert_eq!(statuses, ["HypothesesFail", "HypothesesFail", "HypothesesHold"]);

    let o = dmy_stdin(
        &["symmetry", "-", "--format", "json"],
        &format!("{SECOND}\n(x, y +)\n{HOLDS}\n"),
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_lines(&o).len(), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let json = scratch(
        "map.json",
        r#"{"f1": [[1, 0, "1/2"]], "f2": [[0, 1, "1/3"], [2, 0, "1"]]}"#,
    );
    let o = dmy(&["analyze", json.to_str().unwrap(), "--format", "json"]);
    assert_eq!(json_lines(&o)[0]["status"], "HypothesesHold");
}

#[test]
fn csv_export() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("exceptions.csv");
    let o = dmy(&[
        "orbits",
        FIRST,
        "--grid-extent",
        "2",
        "--grid-step",
        "1",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x0_x,x0_y,outcome,steps"));
    assert!(lines.all(|l| l.split(',').count() == 4));
}

#[test]
fn seeds_and_determinism() {
    let a = stdout(&dmy(&["witness", SECOND, "--format", "json", "--seed", "7"]));
    let b = stdout(&dmy(&["witness", SECOND, "--format", "json", "--seed", "7"]));
    assert_eq!(a, b);
}
