use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qaffine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaffine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn build(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut all = vec!["build"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &path]);
    let o = qaffine(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn build_and_verify() {
    let dir = TempDir::new().unwrap();
    let m = build(dir.path(), "m.json", &["--d", "1", "--a", "1", "--q", "2"]);
    let module: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(module["dim"], 2);
    let t = build(dir.path(), "t.json", &["--d", "0"]);
    let o = qaffine(&["verify", &t]);
    assert_eq!(code(&o), 0);
    let o = qaffine(&["verify", &m]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["overall"], true);
    let o = qaffine(&["verify", &m, "--presentation", "equitable-full"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&qaffine(&["build", "--a", "0"])), 2);
    assert_eq!(code(&qaffine(&["build", "--q", "1"])), 2);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&qaffine(&["verify", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&qaffine(&["verify", "/nonexistent/file.json"])), 2);
}

#[test]
fn corrupted_module_names_the_failing_relation() {
    let dir = TempDir::new().unwrap();
    let m = build(dir.path(), "m.json", &["--d", "1"]);
    let mut module: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    module["assign"]["E1"] = serde_json::json!([["0", "0"], ["0", "0"]]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, module.to_string()).unwrap();
    let o = qaffine(&["verify", bad.to_str().unwrap(), "--format", "text"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("FAIL R5[i=1,j=1]"), "{text}");
}

#[test]
fn split_reports_w_slots() {
    let dir = TempDir::new().unwrap();
    let m = build(dir.path(), "m.json", &["--d", "1"]);
    let b = dir.path().join("b.json");
    let o = qaffine(&[
        "restrict",
        &m,
        "--alpha",
        "1,1",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = qaffine(&["split", b.to_str().unwrap(), "--node", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["report"]["overall"], true);
    let slots = r["W"]["slots"].as_array().unwrap();
    let dims: Vec<u64> = slots.iter().map(|s| s["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 0, 1]);

    let t = build(dir.path(), "t.json", &["--d", "0"]);
    let tb = dir.path().join("tb.json");
    qaffine(&["restrict", &t, "--out", tb.to_str().unwrap()]);
    let o = qaffine(&["split", tb.to_str().unwrap(), "--node", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["W"]["slots"].as_array().unwrap().len(), 1);

    let o = qaffine(&["split", &m, "--node", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("presentation mismatch"));
}

#[test]
fn roundtrip_exit_codes() {
    let dir = TempDir::new().unwrap();
    let m = build(dir.path(), "m.json", &["--d", "2"]);
    let o = qaffine(&["roundtrip", &m, "--alpha", "7,1/3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let t = build(dir.path(), "t.json", &["--d", "0"]);
    assert_eq!(code(&qaffine(&["roundtrip", &t])), 0);
}

#[test]
fn reducible_input_is_refused() {
    let dir = TempDir::new().unwrap();
    let a = build(dir.path(), "a.json", &["--d", "1", "--a", "1"]);
    let b = build(dir.path(), "b.json", &["--d", "1", "--a", "3"]);
    let ma: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let mb: Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    let mut sum = ma.clone();
    sum["dim"] = 4.into();
    for (g, x) in ma["assign"].as_object().unwrap() {
        let y = &mb["assign"][g];
        let mut rows = Vec::new();
        for r in x.as_array().unwrap() {
            let mut row: Vec<Value> = r.as_array().unwrap().clone();
            row.extend(["0".into(), "0".into()]);
            rows.push(Value::Array(row));
        }
        for r in y.as_array().unwrap() {
            let mut row: Vec<Value> = vec!["0".into(), "0".into()];
            row.extend(r.as_array().unwrap().iter().cloned());
            rows.push(Value::Array(row));
        }
        sum["assign"][g] = Value::Array(rows);
    }
    let path = dir.path().join("sum.json");
    std::fs::write(&path, sum.to_string()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&qaffine(&["verify", p])), 0);
    let o = qaffine(&["roundtrip", p]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["refused"], true);
    assert_eq!(r["irreducibility"]["verdict"], "REDUCIBLE");
    assert_eq!(r["irreducibility"]["witness"]["dim"], 2);
}

#[test]
fn extend_and_weights() {
    let dir = TempDir::new().unwrap();
    let m = build(dir.path(), "m.json", &["--d", "2", "--eps", "-1,1"]);
    let b = dir.path().join("b.json");
    qaffine(&[
        "restrict",
        &m,
        "--alpha",
        "7,1/3",
        "--out",
        b.to_str().unwrap(),
    ]);
    let o = qaffine(&["extend", b.to_str().unwrap(), "--eps", "-1,1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(r["module"], original);
    assert_eq!(r["z_identities"]["overall"], true);

    let o = qaffine(&["weights", &m]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["central"], -1);
    assert_eq!(r["weights"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let m = build(dir.path(), "m.json", &["--d", "3", "--a", "1/2"]);
    for cmd in [
        vec!["verify", m.as_str()],
        vec!["weights", m.as_str()],
        vec!["roundtrip", m.as_str()],
    ] {
        let first = qaffine(&cmd).stdout;
        let second = qaffine(&cmd).stdout;
        assert_eq!(first, second);
    }
}

#[test]
fn cartan_from_file() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("c.json");
    std::fs::write(&c, r#"{"A": [[2,-2],[-2,2]]}"#).unwrap();
    let args = ["--cartan", c.to_str().unwrap(), "--d", "2", "--q", "3/2"];
    let m = build(dir.path(), "m.json", &args);
    let module: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(module["cartan"]["q"], "3/2");
    assert_eq!(module["cartan"]["u"], serde_json::json!([1, 1]));
    assert_eq!(code(&qaffine(&["verify", &m])), 0);
    let finite = dir.path().join("f.json");
    std::fs::write(&finite, r#"{"A": [[2,-1],[-1,2]]}"#).unwrap();
    assert_eq!(
        code(&qaffine(&["build", "--cartan", finite.to_str().unwrap()])),
        2
    );
}
