use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn galmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galmod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn example(name: &str) -> String {
    repo_file(&format!("docs/examples/{name}.json")).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = galmod(&all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn validator(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(repo_file(&format!("docs/{name}"))).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, instance: &Value) {
    let errors: Vec<String> = v
        .iter_errors(instance)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn sign_action_is_not_invertible() {
    let sign = example("sign");
    let o = galmod(&["--input", &sign, "invertible"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("invertible: false"));
    assert!(text.contains("obstruction: elementary divisor d_1 = 2"));
    let v = json(&["--input", &sign, "invertible"]);
    assert_eq!(v["result"]["invertible"], Value::Bool(false));
    assert_eq!(v["result"]["certificate"]["kind"], "obstruction");
    assert_eq!(v["result"]["certificate"]["obstruction"]["divisor"], 2);
}

#[test]
fn non_unimodular_generator_is_named() {
    let o = galmod(&["--input", &example("bad"), "info"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("generator `d` is not unimodular"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn exit_codes() {
    let o = galmod(&["--input", &example("infinite"), "info", "--element-cap", "500"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("element cap of 500"));
    let o = galmod(&["dp5", "--subgroup", "s1,s9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown generator `s9`"));
    assert_eq!(galmod(&["info"]).status.code(), Some(1));
    assert_eq!(galmod(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(galmod(&["dp5", "--preset", "dp6"]).status.code(), Some(1));
    assert_eq!(
        galmod(&["--input", "/nonexistent/file.json", "info"]).status.code(),
        Some(1)
    );
    assert_eq!(
        galmod(&["--input", &example("s3"), "--preset", "dp5", "info"])
            .status
            .code(),
        Some(1)
    );
    let o = galmod(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("--assume-zero-cycle"));
}

#[test]
fn dp5_motive_reports_degree_five() {
    let v = json(&["dp5", "motive", "--assume-zero-cycle"]);
    let r = &v["result"];
    assert_eq!(r["verdict"], "zero_dimensional");
    assert_eq!(r["zero_cycle"]["source"], "flag");
    let theorem_etale: Vec<&Value> = r["theorem"]["right"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["kind"]["type"] == "etale")
        .collect();
    assert_eq!(theorem_etale.len(), 1);
    assert_eq!(theorem_etale[0]["kind"]["algebra"]["degrees"], serde_json::json!([5]));
    let text = stdout(&galmod(&["dp5", "motive", "--assume-zero-cycle"]));
    assert!(
        text.contains("isomorphism: S + Z(1) ~= Z + Z(1) + (Spec E_5)(1) + Z(2)"),
        "{text}"
    );
}

#[test]
fn zero_cycle_source_is_recorded() {
    let s3 = example("s3");
    let v = json(&["--input", &s3, "motive"]);
    assert_eq!(v["result"]["zero_cycle"]["source"], "input_file");
    let v = json(&["--input", &s3, "motive", "--assume-zero-cycle"]);
    assert_eq!(v["result"]["zero_cycle"]["source"], "flag");
    let v = json(&["dp5", "motive"]);
    assert_eq!(v["result"]["verdict"], "invertible_no_zero_cycle_assumed");
    assert_eq!(v["result"]["zero_cycle"]["source"], "not_assumed");
}

#[test]
fn subgroup_selection() {
    let v = json(&["dp5", "motive", "--subgroup", "s1", "--assume-zero-cycle"]);
    assert_eq!(v["source"]["group_order"], 2);
    assert_eq!(v["source"]["subgroup"], serde_json::json!(["s1"]));
    let text = stdout(&galmod(&["dp5", "motive", "--subgroup", "s1"]));
    assert!(text.contains("(Spec E_{2,1,1,1})(1)"), "{text}");
    let v = json(&["--preset", "dp5", "info", "--subgroup", "s1,s3"]);
    assert_eq!(v["result"]["group_order"], 4);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["dp5", "motive", "--assume-zero-cycle", "--format", "json"],
        vec!["--preset", "dp6", "coflasque"],
        vec!["--input", &example("s3"), "h1", "--format", "json"],
    ] {
        let a = galmod(&args);
        let b = galmod(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn json_reports_match_schema() {
    let report = validator("galmod-report-1.schema.json");
    let action = validator("galmod-action-1.schema.json");
    for name in ["sign", "bad", "s3", "infinite"] {
        let text = std::fs::read_to_string(example(name)).unwrap();
        assert_valid(&action, &serde_json::from_str(&text).unwrap());
    }
    let s3 = example("s3");
    let sign = example("sign");
    let runs: Vec<Vec<&str>> = vec![
        vec!["dp5"],
        vec!["dp5", "motive", "--assume-zero-cycle"],
        vec!["dp6"],
        vec!["--preset", "dp6", "info"],
        vec!["--preset", "dp6", "h1"],
        vec!["--preset", "dp6", "coflabby"],
        vec!["--preset", "dp6", "coflasque"],
        vec!["--preset", "dp6", "permutation"],
        vec!["--input", &s3, "permutation"],
        vec!["--input", &s3, "motive"],
        vec!["--input", &sign, "motive"],
        vec!["--input", &sign, "invertible"],
        vec!["--input", &sign, "coflabby"],
    ];
    for args in runs {
        let v = json(&args);
        assert_eq!(v["schema"], galmod_cli::REPORT_SCHEMA);
        assert_valid(&report, &v);
    }
    let mut broken = json(&["--preset", "dp6", "info"]);
    broken["result"]["group_order"] = Value::from(0);
    assert!(!report.is_valid(&broken));
}

#[test]
fn text_and_json_agree_on_verdicts() {
    for (args, key, text_line) in [
        (
            vec!["--input", &example("sign") as &str, "coflabby"],
            "coflabby",
            "coflabby: false",
        ),
        (vec!["dp6", "invertible"], "invertible", "invertible: true"),
    ] {
        let text = stdout(&galmod(&args));
        assert!(text.contains(text_line), "{text}");
        let v = json(&args);
        assert_eq!(v["result"][key], Value::Bool(text_line.ends_with("true")));
    }
}

#[test]
fn run_writes_to_given_streams() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = galmod_cli::run(["galmod", "--preset", "dp6", "info"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("group order: 12"));
    assert!(err.is_empty());
}
