//! End-to-end tests of the binary: artifact shapes, schema conformance,
//! exit codes, and determinism across thread counts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disk-cauchy"))
        .args(args)
        .env_remove("DISK_CAUCHY_THREADS")
        .output()
        .expect("binary should spawn")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disk-cauchy"))
        .args(args)
        .env("DISK_CAUCHY_THREADS", threads)
        .output()
        .expect("binary should spawn")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "run failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout should be one JSON document")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no exit code")
}

// A validator for the subset of JSON Schema the published schemas use:
// type (string or array of strings), enum, required, properties, items.

fn type_matches(name: &str, instance: &Value) -> bool {
    match name {
        "object" => instance.is_object(),
        "array" => instance.is_array(),
        "string" => instance.is_string(),
        "integer" => instance.is_i64() || instance.is_u64(),
        "number" => instance.is_number(),
        "boolean" => instance.is_boolean(),
        "null" => instance.is_null(),
        _ => false,
    }
}

fn validate(schema: &Value, instance: &Value, path: &str, errors: &mut Vec<String>) {
    match schema.get("type") {
        Some(Value::String(name)) => {
            if !type_matches(name, instance) {
                errors.push(format!("{path}: expected {name}"));
                return;
            }
        }
        Some(Value::Array(names)) => {
            let ok = names
                .iter()
                .any(|n| n.as_str().is_some_and(|n| type_matches(n, instance)));
            if !ok {
                errors.push(format!("{path}: expected one of {names:?}"));
                return;
            }
        }
        _ => {}
    }
    if let Some(Value::Array(allowed)) = schema.get("enum") {
        if !allowed.contains(instance) {
            errors.push(format!("{path}: {instance} not in enum"));
        }
    }
    if let Some(Value::Array(required)) = schema.get("required") {
        for key in required.iter().filter_map(Value::as_str) {
            if instance.get(key).is_none() {
                errors.push(format!("{path}: missing required key {key}"));
            }
        }
    }
    if let Some(Value::Object(properties)) = schema.get("properties") {
        for (key, subschema) in properties {
            if let Some(child) = instance.get(key) {
                validate(subschema, child, &format!("{path}.{key}"), errors);
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(elements) = instance.as_array() {
            for (index, element) in elements.iter().enumerate() {
                validate(items, element, &format!("{path}[{index}]"), errors);
            }
        }
    }
}

fn load_schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schema")
        .join(name);
    let text = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("schema {} should be readable: {e}", path.display()));
    serde_json::from_str(&text).expect("schema should be valid JSON")
}

fn assert_matches_schema(name: &str, instance: &Value) {
    let schema = load_schema(name);
    let mut errors = Vec::new();
    validate(&schema, instance, "$", &mut errors);
    assert!(errors.is_empty(), "schema {name} violations: {errors:#?}");
}

#[test]
fn constants_artifact_matches_schema_and_reference_values() {
    let output = run(&["constants", "--q", "1.5"]);
    let document = stdout_json(&output);
    assert_matches_schema("constants.schema.json", &document);

    assert_eq!(document["config"]["command"], "constants");
    assert_eq!(document["config"]["parameters"]["q"], "1.5");
    assert_eq!(document["config"]["seed"], 1729);

    let result = &document["result"];
    assert!((result["A"].as_f64().unwrap() - 5.4351271250623443).abs() < 1e-6);
    assert!((result["B"].as_f64().unwrap() - 3.3186313358435623).abs() < 1e-6);
    assert!((result["C_q"].as_f64().unwrap() - 4.2474639946264382).abs() < 1e-6);
    let tail = result["tail_bound"].as_f64().unwrap();
    assert!(tail > 0.0 && tail < 1e-6);
}

#[test]
fn cq_curve_csv_has_headers_and_positive_interior_dip() {
    let output = run(&[
        "cq-curve", "--from", "1.4", "--to", "1.6", "--steps", "3", "--format", "csv",
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();

    let comments: Vec<&str> = lines.iter().copied().filter(|l| l.starts_with('#')).collect();
    assert!(comments.contains(&"#command=cq-curve"));
    assert!(comments.contains(&"#parameters.from=1.4"));
    assert!(comments.contains(&"#parameters.to=1.6"));
    assert!(comments.contains(&"#parameters.steps=3"));
    assert!(comments.contains(&"#seed=1729"));
    assert!(comments.contains(&"#tolerance=0.000001"));
    assert!(comments.contains(&"#format=csv"));
    assert!(comments.contains(&"#output_path=stdout"));

    let data: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "q,C_q,tail_bound");
    assert_eq!(data.len(), 4, "header plus exactly three rows");
    let rows: Vec<Vec<f64>> = data[1..]
        .iter()
        .map(|row| row.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    for row in &rows {
        assert!(row[1] > 0.0, "C_q must be strictly positive");
    }
    assert_eq!(rows[0][0], 1.4);
    assert_eq!(rows[2][0], 1.6);
    // The curve dips between the endpoints of this window.
    assert!(rows[1][1] < rows[0][1]);
    assert!(rows[1][1] < rows[2][1]);
}

#[test]
fn cq_curve_json_matches_schema() {
    let output = run(&["cq-curve", "--from", "1.2", "--to", "1.8", "--steps", "4"]);
    let document = stdout_json(&output);
    assert_matches_schema("cq-curve.schema.json", &document);
    assert_eq!(document["result"]["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn transform_artifact_matches_conjugate_closed_form() {
    let output = run(&["transform", "--g", "one", "--op", "cauchy", "--grid", "4x8"]);
    let document = stdout_json(&output);
    assert_matches_schema("transform.schema.json", &document);
    assert_eq!(document["config"]["parameters"]["op"], "cauchy");
    assert_eq!(document["config"]["parameters"]["grid"], "4x8");
    assert_eq!(document["result"]["grid"]["radial"], 4);
    assert_eq!(document["result"]["grid"]["angular"], 8);

    let rows = document["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 32);
    for row in rows {
        let z = Complex64::from_polar(
            row["r"].as_f64().unwrap(),
            row["theta"].as_f64().unwrap(),
        );
        assert!((row["re"].as_f64().unwrap() - z.re).abs() < 1e-5);
        assert!((row["im"].as_f64().unwrap() + z.im).abs() < 1e-5);
    }
}

#[test]
fn integral_operators_follow_example_closed_forms() {
    // Plain Cauchy integral of the example density: -z log|z|^2.
    let output = run(&[
        "transform", "--g", "example2", "--op", "cauchy-integral", "--grid", "2x8",
    ]);
    let document = stdout_json(&output);
    for row in document["result"]["rows"].as_array().unwrap() {
        let z = Complex64::from_polar(
            row["r"].as_f64().unwrap(),
            row["theta"].as_f64().unwrap(),
        );
        let want = -z * (z.norm_sqr()).ln();
        assert!((row["re"].as_f64().unwrap() - want.re).abs() < 1e-5);
        assert!((row["im"].as_f64().unwrap() - want.im).abs() < 1e-5);
    }

    // Conjugate-moment part of the same density: z/2.
    let output = run(&["transform", "--g", "example2", "--op", "j0star", "--grid", "2x8"]);
    let document = stdout_json(&output);
    for row in document["result"]["rows"].as_array().unwrap() {
        let z = Complex64::from_polar(
            row["r"].as_f64().unwrap(),
            row["theta"].as_f64().unwrap(),
        );
        assert!((row["re"].as_f64().unwrap() - 0.5 * z.re).abs() < 1e-5);
        assert!((row["im"].as_f64().unwrap() - 0.5 * z.im).abs() < 1e-5);
    }
}

#[test]
fn potential_artifact_matches_closed_form() {
    let output = run(&["potential", "--g", "one", "--grid", "3x8"]);
    let document = stdout_json(&output);
    assert_matches_schema("potential.schema.json", &document);
    for row in document["result"]["rows"].as_array().unwrap() {
        let r = row["r"].as_f64().unwrap();
        assert!((row["re"].as_f64().unwrap() - (r * r - 1.0)).abs() < 1e-5);
        assert!(row["im"].as_f64().unwrap().abs() < 1e-5);
    }
}

#[test]
fn verify_suite_artifact_matches_schema_and_passes() {
    let output = run(&["verify", "--suite", "ex2"]);
    assert_eq!(exit_code(&output), 0);
    let document = stdout_json(&output);
    assert_matches_schema("verify.schema.json", &document);
    assert_eq!(document["result"]["suite_id"], "ex2");
    let checks = document["result"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    for check in checks {
        assert_eq!(check["status"], "pass", "failed check: {check}");
    }
}

#[test]
fn verify_csv_quotes_descriptions_and_names_columns() {
    let output = run(&["verify", "--suite", "ex2", "--format", "csv"]);
    assert_eq!(exit_code(&output), 0);
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.contains(&"#suite_id=ex2"));
    let header_index = lines
        .iter()
        .position(|l| *l == "id,description,status,measured,target,tolerance")
        .expect("column header row present");
    let rows = &lines[header_index + 1..];
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert!(row.contains(",pass,") || row.contains("\",pass,"), "row: {row}");
    }
}

#[test]
fn schema_validator_detects_violations() {
    let schema = load_schema("constants.schema.json");
    let broken: Value = serde_json::json!({
        "config": {
            "command": "constants",
            "parameters": {},
            "output_path": "stdout",
            "format": "csv",
            "seed": 1729,
            "tolerance": "tight"
        },
        "result": { "q": 1.5, "A": 1.0, "B": 2.0 }
    });
    let mut errors = Vec::new();
    validate(&schema, &broken, "$", &mut errors);
    let text = format!("{errors:?}");
    assert!(text.contains("missing required key C_q"), "{text}");
    assert!(text.contains("missing required key tail_bound"), "{text}");
    assert!(text.contains("$.config.tolerance"), "{text}");
    assert!(text.contains("$.config.format"), "{text}");
}

#[test]
fn config_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["constants", "--q", "2.5"],
        &["constants", "--q", "1.5", "--tol", "-1"],
        &["cq-curve", "--steps", "0"],
        &["cq-curve", "--from", "1.8", "--to", "1.2"],
        &["transform", "--g", "nope", "--op", "cauchy"],
        &["transform", "--g", "one", "--op", "cauchy", "--grid", "axb"],
        &["transform", "--g", "one", "--op", "cauchy", "--grid", "0x8"],
        &["verify", "--suite", "nope"],
        &["verify", "--suite", "thm2", "--bogus"],
        &["plot"],
    ];
    for args in cases {
        let output = run(args);
        assert_eq!(exit_code(&output), 2, "args {args:?}");
        assert!(output.stdout.is_empty(), "no artifact on config error: {args:?}");
    }
    let output = run_with_threads(&["constants", "--q", "1.5"], "abc");
    assert_eq!(exit_code(&output), 2);
    let output = run_with_threads(&["constants", "--q", "1.5"], "0");
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn out_flag_writes_the_artifact_to_a_file() {
    let path: PathBuf = std::env::temp_dir().join(format!(
        "disk-cauchy-out-{}.json",
        std::process::id()
    ));
    let path_str = path.to_str().unwrap();
    let output = run(&["constants", "--q", "1.2", "--out", path_str]);
    assert_eq!(exit_code(&output), 0);
    assert!(output.stdout.is_empty(), "artifact goes to the file only");

    let text = fs::read_to_string(&path).unwrap();
    let document: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(document["config"]["output_path"], *path_str);
    assert!((document["result"]["C_q"].as_f64().unwrap() - 6.0946421719172733).abs() < 1e-6);

    let second = run(&["constants", "--q", "1.2", "--out", path_str]);
    assert_eq!(exit_code(&second), 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), text, "rewrite is byte-identical");
    fs::remove_file(&path).ok();
}

#[test]
fn artifacts_do_not_depend_on_thread_count() {
    let args = ["cq-curve", "--from", "1.3", "--to", "1.7", "--steps", "5"];
    let serial = run_with_threads(&args, "1");
    let parallel = run_with_threads(&args, "4");
    assert_eq!(exit_code(&serial), 0);
    assert_eq!(exit_code(&parallel), 0);
    assert_eq!(serial.stdout, parallel.stdout);

    let args = ["verify", "--suite", "thm3", "--samples", "500", "--seed", "11"];
    let serial = run_with_threads(&args, "1");
    let parallel = run_with_threads(&args, "4");
    assert_eq!(exit_code(&serial), 0);
    assert_eq!(exit_code(&parallel), 0);
    assert_eq!(serial.stdout, parallel.stdout);
}
