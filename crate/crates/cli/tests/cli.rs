use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbiloop")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (v, out.status.code().unwrap())
}

#[test]
fn classes_of_the_order_120_group() {
    let (v, code) = json(&["classes", "--group", r#"{"type":"matrix_sl2","p":5}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["class_count"], 9);
    let rows = v["classes"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let total: u64 = rows.iter().map(|r| r["size"].as_u64().unwrap()).sum();
    assert_eq!(total, 120);
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let (v, _) = json(&["classes", "--group", "S4"]);
    let out = run(&["classes", "--group", "S4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let sizes: Vec<u64> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("|G|"))
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    let from_json: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|r| r["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, from_json);
    assert!(text.contains("c(G) = 5"));
}

#[test]
fn ring_on_the_poincare_sphere() {
    let (v, code) = json(&["ring", "--problem", &fixture("poincare_sphere_f7.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["applicable"], true);
    assert_eq!(v["c_g"], 9);
    assert_eq!(v["triviality_verdict"], "trivial_by_simply_connected");
    assert_eq!(v["result_ring"]["center"]["split_as_product_of_fields"], 9);
    for row in v["dimension_table"].as_array().unwrap() {
        assert_eq!(row["dim_result"].as_u64().unwrap(), 9 * row["dim_loop_ring"].as_u64().unwrap());
    }
}

#[test]
fn ring_rejects_characteristic_five() {
    let (v, code) = json(&["ring", "--problem", &fixture("poincare_sphere_f5.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["applicable"], false);
    assert_eq!(v["reason"], "char divides |G|");
    assert!(v["result_ring"].is_null());
}

#[test]
fn check_matches_ring_gates() {
    let (v, code) = json(&["check", "--problem", &fixture("poincare_sphere_f7.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["coprime_ok"], true);
    assert!(v["result_ring"].is_null());
    let (v, code) = json(&["check", "--problem", &fixture("poincare_sphere_f7.json"), "--char", "3"]);
    assert_eq!((code, v["coprime_ok"].as_bool()), (2, Some(false)));
}

#[test]
fn verify_degenerate_instance() {
    let out = run(&["verify", "--problem", &fixture("trivial_s3.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["center_oracle", "loop_ring_laws", "transfer", "theorem"] {
        let line = text.lines().find(|l| l.starts_with(name)).unwrap();
        assert!(line.contains("pass"), "{line}");
    }
}

#[test]
fn verify_order_six_group() {
    let (v, code) = json(&["verify", "--problem", &fixture("s3_group.json")]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn verify_skips_transfer_when_char_divides() {
    let (v, code) = json(&["verify", "--problem", &fixture("s3_group.json"), "--char", "3"]);
    assert_eq!(code, 2);
    let statuses: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["pass", "pass", "skipped", "skipped"]);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["ring", "--problem", &fixture("s3_group.json"), "--format", "json"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
}

#[test]
fn poincare_table_with_window_override() {
    let (v, code) = json(&["poincare", "--manifold", "S3", "--char", "7", "--window", "-3", "4"]);
    assert_eq!(code, 0);
    let dims: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["dim_loop_ring"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 0, 1, 1, 1, 1, 1, 1]);
    let (v, _) = json(&["poincare", "--manifold", "S3", "--char", "7", "--group", "S3", "--window", "0", "2"]);
    assert_eq!(v["c_g"], 3);
    assert_eq!(v["rows"][2]["dim_orbifold"], 3);
}

#[test]
fn center_and_class_constants() {
    let (v, code) = json(&["center", "--group", "Q8", "--char", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 5);
    assert!(v["split_as_product_of_fields"].is_null());
    let (v, _) = json(&["center", "--group", "Q8", "--char", "3", "--alg-closed"]);
    assert_eq!(v["split_as_product_of_fields"], 5);
    let (v, _) = json(&["class-constants", "--group", "Z2"]);
    assert_eq!(v["constants"][1][1], serde_json::json!([1, 0]));
}

#[test]
fn extra_catalogs_are_loaded() {
    let (v, code) = json(&["poincare", "--catalog", &fixture("extra_catalog.json"), "--manifold", "S9", "--window", "-9", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"][0]["dim_loop_ring"], 1);
}

#[test]
fn errors_go_to_stderr_with_location() {
    let out = run(&["ring", "--problem", &fixture("bad_field.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad_field.json:5:"), "{err}");
    assert!(err.contains("field.char"), "{err}");

    let out = run(&["classes"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("--group"));

    let out = run(&["poincare", "--manifold", "S3", "--window", "4", "-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("invalid degree window"));
}
