use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn nct() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nct"));
    cmd.env_remove("NCT_SEED").env_remove("NCT_BOX");
    cmd
}

fn run(args: &[&str]) -> Output {
    nct().args(args).output().expect("nct runs")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&doc).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, doc: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    p
}

fn theta2() -> Value {
    json!([[0.0, 0.3], [-0.3, 0.0]])
}

fn u1() -> Value {
    json!({"n": 2, "theta": theta2(), "coeffs": [{"m": [1, 0], "re": 1.0, "im": 0.0}]})
}

fn coeff_at(el: &Value, m: &[i64]) -> (f64, f64) {
    for c in el["coeffs"].as_array().unwrap() {
        let mode: Vec<i64> = c["m"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        if mode == m {
            return (c["re"].as_f64().unwrap(), c["im"].as_f64().unwrap());
        }
    }
    (0.0, 0.0)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn apply_lambda_two_on_generator() {
    let dir = tempfile::tempdir().unwrap();
    let sym = write(dir.path(), "lambda_s2.json", &json!({"kind": "lambda", "s": 2.0, "n": 2}));
    let el = write(dir.path(), "u1.json", &u1());
    let out = dir.path().join("out.json");
    let o = run(&["apply", "--symbol", s(&sym), "--element", s(&el), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let got = read(&out);
    assert_valid("element", &got);
    let (re, im) = coeff_at(&got, &[1, 0]);
    assert!((re - 2.0).abs() < 1e-12 && im.abs() < 1e-12);
    assert_eq!(got["coeffs"].as_array().unwrap().len(), 1);
}

#[test]
fn norm_at_zero_is_the_hilbert_norm() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({"n": 1, "theta": [[0.0]], "coeffs": [
        {"m": [0], "re": 1.0, "im": -2.0}, {"m": [3], "re": 0.5, "im": 0.0}, {"m": [-1], "re": 0.0, "im": 2.0}
    ]});
    let el = write(dir.path(), "a.json", &doc);
    let out = dir.path().join("n.json");
    let o = run(&["norm", "--s", "0", "--element", s(&el), "--out", s(&out)]);
    assert!(o.status.success());
    let got = read(&out);
    assert_valid("norm", &got);
    let want = (1.0f64 + 4.0 + 0.25 + 4.0).sqrt();
    assert!((got["norm"].as_f64().unwrap() - want).abs() < 1e-14);

    let o = run(&["norm", "--s", "1", "--element", s(&el), "--out", s(&out)]);
    assert!(o.status.success());
    let want = (5.0f64 + 10.0 * 0.25 + 2.0 * 4.0).sqrt();
    assert!((read(&out)["norm"].as_f64().unwrap() - want).abs() < 1e-13);
}

#[test]
fn expand_compose_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = json!([[0.0]]);
    let one = json!({"n": 1, "theta": t1, "coeffs": [{"m": [0], "re": 1.0, "im": 0.0}]});
    let gen = json!({"n": 1, "theta": t1, "coeffs": [{"m": [1], "re": 1.0, "im": 0.0}]});
    let xi = write(dir.path(), "xi.json", &json!({"kind": "polynomial", "terms": [{"exp": [1], "coeff": one}]}));
    let u = write(dir.path(), "u1const.json", &json!({"kind": "polynomial", "terms": [{"exp": [0], "coeff": gen}]}));
    for p in [&xi, &u] {
        assert_valid("symbol", &read(p));
    }
    let out = dir.path().join("c.json");
    let o = run(&[
        "expand", "compose", "--symbol", s(&xi), "--symbol2", s(&u), "--order", "2", "--at", "3", "--oracle", "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let got = read(&out);
    assert_valid("expand", &got);
    assert!(got["residual"].as_f64().unwrap() <= 1e-10);
    // xi o U: P_xi(U U^3) = 4 U^4, symbol 4 U
    assert_eq!(coeff_at(&got["oracle"], &[1]), (4.0, 0.0));
}

#[test]
fn expand_adjoint_and_rellich_outputs_validate() {
    let dir = tempfile::tempdir().unwrap();
    let sym = write(
        dir.path(),
        "sym.json",
        &json!({"kind": "lambda", "s": -1.0, "coeff": u1()}),
    );
    let out = dir.path().join("e.json");
    let o = run(&["expand", "adjoint", "--symbol", s(&sym), "--order", "3", "--at", "2,1", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let got = read(&out);
    assert_valid("expand", &got);
    assert_eq!(got["terms"].as_array().unwrap().len(), 3);

    let scaled = |c: f64| {
        json!({"n": 2, "theta": theta2(), "coeffs": [{"m": [0, 0], "re": c, "im": 0.0}, {"m": [1, 1], "re": 0.1, "im": 0.0}]})
    };
    let seq = json!([scaled(0.5), scaled(0.51), scaled(-0.5), scaled(0.505)]);
    assert_valid("sequence", &seq);
    let seq = write(dir.path(), "seq.json", &seq);
    let out = dir.path().join("r.json");
    let o = run(&["rellich", "--sequence", s(&seq), "--s", "2", "--t", "0", "--bound", "1", "--eps", "0.01", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let got = read(&out);
    assert_valid("rellich", &got);
    assert_eq!(got["indices"], json!([0, 1, 3]));
    assert_eq!(got["certified"], json!(true));
}

#[test]
fn verify_report_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&["verify", "symbols", "--seed", "7", "--report", s(p)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ra, rb) = (read(&a), read(&b));
    assert_valid("report", &ra);
    assert_eq!(ra["status"], json!("pass"));
    assert_eq!(ra["seed"], json!(7));
    assert_eq!(without_timing(ra), without_timing(rb));
}

#[test]
fn every_suite_report_validates() {
    let o = run(&["verify", "all", "--trials", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_valid("report", &rep);
    for prefix in ["core/", "symbols/", "pdo/", "sobolev/", "module/", "osc/"] {
        assert!(rep["checks"].as_array().unwrap().iter().any(|c| c["name"].as_str().unwrap().starts_with(prefix)));
    }
    let o = run(&["osc", "--amplitude", "poly-gauss", "--cutoff", "both"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_valid("report", &serde_json::from_slice(&o.stdout).unwrap());
}

#[test]
fn flags_override_environment() {
    let seed_of = |args: &[&str], env: Option<&str>| -> Value {
        let mut cmd = nct();
        cmd.args(args);
        if let Some(v) = env {
            cmd.env("NCT_SEED", v);
        }
        let o = cmd.output().unwrap();
        assert!(o.status.success());
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["seed"].clone()
    };
    assert_eq!(seed_of(&["verify", "core", "--trials", "2"], None), json!(42));
    assert_eq!(seed_of(&["verify", "core", "--trials", "2"], Some("11")), json!(11));
    assert_eq!(seed_of(&["verify", "core", "--trials", "2", "--seed", "5"], Some("11")), json!(5));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "core", "--trials", "2"]).status.code(), Some(0));
    // a tolerance nothing can meet turns every nonzero residual into a failure
    assert_eq!(run(&["verify", "core", "--trials", "2", "--tol", "1e-300"]).status.code(), Some(1));
    let o = run(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(run(&["verify", "core", "--box", "0"]).status.code(), Some(2));
    let o = nct().args(["verify", "core"]).env("NCT_BOX", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["norm", "--s", "1", "--element", "/nonexistent/a.json"]).status.code(), Some(2));
}

#[test]
fn malformed_input_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"n\": 1,\n  \"theta\": [[0.0]],\n  \"coeffs\": [oops]\n}").unwrap();
    let o = run(&["norm", "--s", "0", "--element", s(&p)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json") && err.contains('4'), "{err}");
}

#[test]
fn csv_and_markdown_formats() {
    let o = run(&["verify", "core", "--trials", "2", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), ["suite", "name", "status", "measured", "bound", "margin", "detail"]);
    assert_eq!(rows.records().count(), 6);
    let o = run(&["verify", "core", "--trials", "2", "--format", "md"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("| associativity |"));
}
