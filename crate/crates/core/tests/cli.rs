use std::process::{Command, Output};

use serde_json::Value;

fn qwh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwh"))
        .args(args)
        .output()
        .expect("spawn qwh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_report(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["check", "--format", "json"];
    full.extend_from_slice(args);
    let o = qwh(&full);
    let v: Value = serde_json::from_slice(&o.stdout).expect("json on stdout");
    (v, o.status.code().unwrap())
}

fn zero_timings(v: &mut Value) {
    for item in v["items"].as_array_mut().unwrap() {
        item["timing_ms"] = Value::from(0.0);
    }
}

#[test]
fn ybe_passes() {
    let o = qwh(&["check", "--suite", "ybe"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("suite ybe: PASS"));
}

#[test]
fn generic_q_rtt7_fails_with_residuals() {
    let o = qwh(&["check", "--suite", "rtt-7", "--generic-q"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("[FAIL]"));
    assert!(text.contains("residual:"));
}

#[test]
fn unknown_suite_lists_registry() {
    let o = qwh(&["check", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("registered suites: ybe, involution"));
}

#[test]
fn parse_error_reports_span() {
    let o = qwh(&["normalize", "-a", "xspace", "-e", "x1 x2 +"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error: 1:8:"), "{err}");
}

#[test]
fn bad_params_exit_2() {
    let o = qwh(&["check", "--suite", "ybe", "--params", "u=0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qwh(&["check", "--suite", "ybe", "--params", "u"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn normalize_examples() {
    for (alg, expr, want) in [
        ("xspace", "x1*x2", "u^2*x2*x1 + s*x3*x3"),
        ("xispace", "xi1*xi1", "0"),
        ("TT7", "T12*T21", "u^4*T21*T12"),
        ("xspace", "x3 x1", "x3*x1"),
        ("xspace_generic_q", "x1*x2", "q*x2*x1 + s*x3*x3"),
    ] {
        let o = qwh(&["normalize", "-a", alg, "-e", expr]);
        assert_eq!(o.status.code(), Some(0), "{alg} {expr}");
        assert_eq!(stdout(&o).trim(), want, "{alg} {expr}");
    }
}

#[test]
fn normalize_specialized() {
    let o = qwh(&["normalize", "-a", "xspace", "-e", "x1*x2", "--params", "u=2,s=1/3"]);
    assert_eq!(stdout(&o).trim(), "4*x2*x1 + 1/3*x3*x3");
}

#[test]
fn normalize_presentation_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.alg");
    std::fs::write(&path, "algebra plane\nparams u\ngenerators a > b\nrel a b = u b a\n").unwrap();
    let o = qwh(&["normalize", "-a", path.to_str().unwrap(), "-e", "a a b"]);
    assert_eq!(stdout(&o).trim(), "u^2*b*a*a");
}

#[test]
fn derivative_command() {
    let o = qwh(&["d", "--index", "1", "--expr", "x1"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = qwh(&["d", "--index", "4", "--expr", "x1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qwh(&["d", "--index", "1", "--expr", "xi1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derive_command() {
    let o = qwh(&["derive", "--ansatz", "xi"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in ["k = 0", "lam12 = 0", "mu12 = 0", "lam = -u^(-1)", "mu = -u", "c21 = -u^(-2)"] {
        assert!(text.lines().any(|l| l == line), "missing {line} in\n{text}");
    }
    let o = qwh(&["derive", "--ansatz", "xi-variant"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("inconsistent: "));
}

#[test]
fn json_validates_against_schema() {
    let schema_path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/check-report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    for args in [
        vec!["--suite", "ybe"],
        vec!["--suite", "comodule", "--generic-q"],
        vec!["--suite", "involution", "--params", "u=3,s=-1/2"],
    ] {
        let (v, _) = json_report(&args);
        assert!(compiled.is_valid(&v), "{args:?}: {v}");
    }
    let mut bad: Value = serde_json::from_str(r#"{"suite":"x","status":"MAYBE","items":[],"version":"0.1.0","bindings":{}}"#).unwrap();
    assert!(!compiled.is_valid(&bad));
    bad["status"] = Value::from("PASS");
    assert!(compiled.is_valid(&bad));
}

#[test]
fn json_is_deterministic_modulo_timing() {
    let (mut a, _) = json_report(&["--suite", "confluence"]);
    let (mut b, _) = json_report(&["--suite", "confluence"]);
    zero_timings(&mut a);
    zero_timings(&mut b);
    assert_eq!(a.to_string(), b.to_string());
}

#[test]
fn text_and_json_items_agree() {
    for suite in ["eigenspaces", "inverse-h8"] {
        let (v, code) = json_report(&["--suite", suite]);
        let text = stdout(&qwh(&["check", "--suite", suite]));
        let from_text: Vec<(String, String)> = text
            .lines()
            .filter_map(|l| l.strip_prefix("  ["))
            .map(|l| {
                let (status, label) = l.split_once("] ").unwrap();
                (status.to_string(), label.to_string())
            })
            .collect();
        let from_json: Vec<(String, String)> = v["items"]
            .as_array()
            .unwrap()
            .iter()
            .map(|i| (i["status"].as_str().unwrap().to_string(), i["label"].as_str().unwrap().to_string()))
            .collect();
        assert_eq!(from_text, from_json, "{suite}");
        assert_eq!(code, 0);
    }
}

#[test]
fn out_path_gets_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = qwh(&["check", "--suite", "involution", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "suite involution: PASS");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "PASS");
}

#[test]
fn exit_code_tracks_status_for_all() {
    let (v, code) = json_report(&["--suite", "all", "--params", "u=2,s=3"]);
    let want = match v["status"].as_str().unwrap() {
        "PASS" => 0,
        "FAIL" => 1,
        _ => 2,
    };
    assert_eq!(code, want);
    assert_eq!(v["bindings"]["u"], "2");
}
