use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ramlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args(args)
        .env_remove("RAMLAB_MODULUS_TABLE")
        .output()
        .expect("spawn ramlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = ramlab(&all);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn series_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn assert_single_line_error(o: &Output, code: i32, needle: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("ramlab: error: "), "{err}");
    assert!(err.contains(needle), "{err}");
}

#[test]
fn breaks_p3() {
    let v = json_of(&["breaks", "--p", "3", "--e1", "1", "--f", "1"]);
    assert_eq!(v["upper"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["lower"], serde_json::json!(["1", "4", "13"]));
    assert_eq!(v["different"], "94");
    let text = stdout(&ramlab(&["breaks", "--p", "3", "--e1", "1", "--f", "1"]));
    assert!(text.contains("different      94"));
}

#[test]
fn breaks_p2_json_keys() {
    let v = json_of(&["breaks", "--p", "2", "--e1", "1", "--f", "1"]);
    for key in ["upper", "lower", "different", "discriminant", "fdpf_ok"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["fdpf_ok"], true);
    assert_eq!(v["different"], "8");
    assert_eq!(v["discriminant"], "16");
}

#[test]
fn breaks_rejects_composite_p() {
    let o = ramlab(&["breaks", "--p", "4", "--e1", "1", "--f", "1"]);
    assert_single_line_error(&o, 2, "p must be prime");
}

#[test]
fn profile_reports_and_rejects() {
    let v = json_of(&[
        "profile", "--p", "3", "--e1", "1", "--f", "1", "--breaks", "1:1,3:1",
    ]);
    assert_eq!(v["degree"], "9");
    assert_eq!(v["admissible"], true);

    let o = ramlab(&[
        "profile", "--p", "3", "--e1", "1", "--f", "1", "--breaks", "3:1,1:1",
    ]);
    assert_single_line_error(&o, 1, "not strictly increasing");
    let o = ramlab(&[
        "profile", "--p", "3", "--e1", "1", "--f", "1", "--breaks", "3:2",
    ]);
    assert_single_line_error(&o, 1, "top-dimension");
    let o = ramlab(&[
        "profile", "--p", "3", "--e1", "1", "--f", "1", "--breaks", "3-1",
    ]);
    assert_single_line_error(&o, 2, "upper:dim");
}

#[test]
fn as_reduce_report_oracle() {
    let f = series_file(r#"{"precision": 1, "terms": [[-9, [1]]]}"#);
    let v = json_of(&[
        "as",
        "--p",
        "3",
        "--f",
        "1",
        "--series",
        f.path().to_str().unwrap(),
        "--reduce",
    ]);
    assert_eq!(v["poles"], serde_json::json!([[-1, [1]]]));
    assert_eq!(v["level"], 1);

    let g = series_file(
        r#"[{"precision": 1, "terms": [[0, [1]]]},
            {"precision": 1, "terms": [[-1, [1]]]},
            {"precision": 1, "terms": [[-3, [1]]]}]"#,
    );
    let v = json_of(&[
        "as",
        "--p",
        "2",
        "--f",
        "1",
        "--series",
        g.path().to_str().unwrap(),
        "--report",
    ]);
    assert_eq!(v["different"], "10");

    let h = series_file(r#"{"precision": 1, "terms": [[-3, [1]]]}"#);
    let v = json_of(&[
        "as",
        "--p",
        "2",
        "--f",
        "1",
        "--series",
        h.path().to_str().unwrap(),
        "--oracle",
    ]);
    assert_eq!(v["measured"], 4);
}

#[test]
fn as_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args([
            "--json", "as", "--p", "2", "--f", "1", "--series", "-", "--reduce",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"precision": 1, "terms": [[-4, [1]]]}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["poles"], serde_json::json!([[-1, [1]]]));
}

#[test]
fn as_rejects_malformed_series() {
    let f = series_file("{\"terms\": 3}");
    let o = ramlab(&[
        "as",
        "--p",
        "2",
        "--f",
        "1",
        "--series",
        f.path().to_str().unwrap(),
        "--reduce",
    ]);
    assert_ne!(o.status.code(), Some(0));
    assert_eq!(stderr(&o).lines().count(), 1);
    assert!(stderr(&o).starts_with("ramlab: error: "));
}

#[test]
fn modulus_table_override() {
    let table = series_file(r#"{"2,2": [1, 1, 1]}"#);
    let f = series_file(r#"{"precision": 1, "terms": [[-1, [0, 1]]]}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args([
            "as",
            "--p",
            "2",
            "--f",
            "2",
            "--series",
            f.path().to_str().unwrap(),
            "--reduce",
        ])
        .env("RAMLAB_MODULUS_TABLE", table.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));

    let bad = series_file(r#"{"2,2": [1, 0, 1]}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args([
            "as",
            "--p",
            "2",
            "--f",
            "2",
            "--series",
            f.path().to_str().unwrap(),
            "--reduce",
        ])
        .env("RAMLAB_MODULUS_TABLE", bad.path())
        .output()
        .unwrap();
    assert_single_line_error(&o, 2, "");
}

#[test]
fn norm_passes_and_guards() {
    for (p, m) in [("3", "1"), ("2", "2")] {
        let o = ramlab(&["norm", "--p", p, "--m", m, "--trials", "25", "--seed", "7"]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("25/25 pass"));
    }
    let o = ramlab(&["norm", "--p", "2", "--m", "9", "--seed", "7"]);
    assert_single_line_error(&o, 2, "size guard");
    let o = ramlab(&["norm", "--p", "2", "--m", "2"]);
    assert_single_line_error(&o, 2, "--seed");
}

#[test]
fn tables() {
    let v = json_of(&["tables", "--kind", "cyclotomic", "--p", "2", "--m", "3"]);
    assert_eq!(v["discriminant"], "8");
    assert_eq!(v["consistent"], true);
    let v = json_of(&[
        "tables",
        "--kind",
        "classfield",
        "--p",
        "3",
        "--f",
        "1",
        "--m",
        "2",
    ]);
    assert_eq!(v["discriminant"], "9");
    let v = json_of(&[
        "tables",
        "--kind",
        "nonkummerian",
        "--p",
        "3",
        "--e",
        "1",
        "--f",
        "1",
    ]);
    assert_eq!(v["different"], "4");
    let v = json_of(&[
        "tables",
        "--kind",
        "nonkummerian",
        "--p",
        "3",
        "--e1",
        "1",
        "--f",
        "1",
    ]);
    assert_eq!(v["different"], "4");
    let o = ramlab(&["tables", "--kind", "cyclotomic", "--p", "2"]);
    assert_single_line_error(&o, 2, "--m");
}

#[test]
fn json_round_trips_bytes() {
    let runs: [&[&str]; 4] = [
        &["--json", "breaks", "--p", "5", "--e1", "2", "--f", "3"],
        &[
            "--json", "norm", "--p", "2", "--m", "3", "--trials", "5", "--seed", "11",
        ],
        &[
            "--json",
            "tables",
            "--kind",
            "cyclotomic",
            "--p",
            "3",
            "--m",
            "2",
        ],
        &[
            "--json",
            "profile",
            "--p",
            "2",
            "--e1",
            "2",
            "--f",
            "1",
            "--breaks",
            "1:1,3:1,4:1",
        ],
    ];
    for args in runs {
        let o = ramlab(args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let text = stdout(&o);
        assert!(!text.contains('.'), "float in output of {args:?}");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    }
}

#[test]
fn help_exits_zero() {
    assert!(ramlab(&["--help"]).status.success());
    assert_eq!(ramlab(&[]).status.code(), Some(2));
}
