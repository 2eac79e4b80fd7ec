//! End-to-end CLI behavior: exit codes, report envelopes, determinism
//! across runs and thread counts, and schema conformance.

use fgraph_cli::{execute, Cli};
use clap::Parser;
use serde_json::Value;

fn parse(args: &[&str]) -> Cli {
    let mut full = vec!["fgraph"];
    full.extend_from_slice(args);
    Cli::try_parse_from(full).expect("arguments parse")
}

fn envelope(args: &[&str]) -> (i32, Value) {
    let cli = parse(args);
    let outcome = execute(&cli).expect("command runs");
    let report = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": "x",
        "seed": cli.seed,
        "budget": 0,
        "result": outcome.report,
    });
    (outcome.exit_code, report)
}

#[test]
fn banana3_class_report() {
    let (code, report) = envelope(&["class", "--family", "banana", "-n", "3"]);
    assert_eq!(code, 0);
    let proj = &report["result"]["projective_class"];
    assert_eq!(proj["determined"], true);
    assert_eq!(proj["display_T"], "T + 2");
}

#[test]
fn check_f1_banana_even_fails_on_complement() {
    // banana 4: the hypersurface passes (exit 0) but the complement
    // violates the Euler-characteristic condition, visible in the report
    let (code, report) = envelope(&["check-f1", "--family", "banana", "-n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["hypersurface_passes"], true);
    assert_eq!(report["result"]["passes"], false);
    let y = report["result"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["variety"] == "Y")
        .unwrap();
    assert_eq!(y["chi"], -1);
    assert_eq!(y["passes"], false);
    // a forest passes everywhere: the hypersurface is empty
    let (code, report) = envelope(&["check-f1", "--family", "path", "-n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["passes"], true);
}

#[test]
fn missing_graph_file_is_a_usage_error() {
    let code = fgraph_cli::run(["fgraph", "psi", "--graph", "/nonexistent/missing.json"]);
    assert_eq!(code, 2);
}

#[test]
fn subprocess_exit_codes() {
    // the real binary: usage error on a missing file
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_fgraph"))
        .args(["psi", "--graph", "missing.json"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));

    let out = std::process::Command::new(env!("CARGO_BIN_EXE_fgraph"))
        .args(["psi", "--family", "cycle", "-n", "3"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).expect("valid JSON report");
    assert_eq!(report["result"]["psi"], "t1 + t2 + t3");
    validate_envelope(&report);
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let run = |threads: &str| -> Vec<u8> {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_fgraph"))
            .args(["scan", "--max-edges", "3", "--seed", "5", "--threads", threads])
            .output()
            .expect("binary runs");
        out.stdout
    };
    let a = run("1");
    let b = run("1");
    let c = run("4");
    assert_eq!(a, b, "two identical runs differ");
    assert_eq!(a, c, "thread count changed the report");
}

#[test]
fn scan_small_is_clean() {
    let (code, report) = envelope(&["scan", "--max-edges", "3"]);
    assert_eq!(code, 0, "no non-forest exceptions at 3 edges");
    // forests are reported with chi(Y) = n, never suppressed
    let exceptions = report["result"]["exceptions"].as_array().unwrap();
    assert!(exceptions.iter().all(|e| e["is_forest"] == true));
}

#[test]
fn arrangement_from_graph() {
    let (code, report) = envelope(&["arrangement", "--family", "banana", "-n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["hyperplanes"], 3);
    assert_eq!(report["result"]["mobius_condition"]["passes"], true);
}

#[test]
fn lambda_with_oracle() {
    let (code, report) = envelope(&[
        "lambda",
        "--family",
        "cycle",
        "-n",
        "3",
        "--oracle-primes",
        "2,3,5",
    ]);
    assert_eq!(code, 0);
    for row in report["result"]["oracle"].as_array().unwrap() {
        assert_eq!(row["agree"], true);
    }
    assert_eq!(report["result"]["lambda_class_T"], "T + 2");
}

#[test]
fn conf_with_oracle() {
    let (code, report) = envelope(&[
        "conf", "--family", "cycle", "-n", "3", "--dim", "2", "--oracle",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["oracle_agrees"], true);
    assert_eq!(report["result"]["euler_matches_class"], true);
}

#[test]
fn csm_triangle() {
    let (code, report) = envelope(&["csm", "--family", "cycle", "-n", "3", "--q", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["c_gamma"], "T^3 + 2*T^2 + T");
    assert_eq!(report["result"]["feynman_rules"]["derivative_identity"], true);
    assert_eq!(report["result"]["q_deformed"]["limit_matches"], true);
}

#[test]
fn corpus_listing() {
    let (code, report) = envelope(&["corpus", "--max-edges", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["count"], 2);
}

#[test]
fn check_f1_banana15_passes_with_coefficients() {
    // closed form route; the verdicts echo the class coefficient list
    let (code, report) = envelope(&["check-f1", "--family", "banana", "-n", "15"]);
    assert_eq!(code, 0);
    let x = report["result"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["variety"] == "X")
        .unwrap();
    assert_eq!(x["passes"], true);
    let coeffs: Vec<&str> = x["class"]["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(coeffs[0], "14");
    assert_eq!(coeffs[13], "1");
}

#[test]
fn budget_env_var_is_honored() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_fgraph"))
        .args(["class", "--family", "banana", "-n", "3", "--method", "counting"])
        .env("FGRAPH_BUDGET", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2), "tiny budget must error out");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "stderr: {err}");
}

#[test]
fn arrangement_normals_file_and_out_file() {
    let dir = std::env::temp_dir();
    let normals = dir.join("fgraph_test_arr.json");
    let outfile = dir.join("fgraph_test_report.json");
    std::fs::write(
        &normals,
        r#"{"ambient_dim":3,"normals":[["1","0","0"],["0","1","0"]]}"#,
    )
    .unwrap();
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_fgraph"))
        .args([
            "arrangement",
            "--normals",
            normals.to_str().unwrap(),
            "--out",
            outfile.to_str().unwrap(),
        ])
        .status()
        .expect("binary runs");
    assert!(status.success());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&outfile).unwrap()).unwrap();
    assert_eq!(report["result"]["hyperplanes"], 2);
    assert_eq!(report["result"]["characteristic_polynomial"], "L^3 - 2*L^2 + L");
    let _ = std::fs::remove_file(&normals);
    let _ = std::fs::remove_file(&outfile);
}

// ---- schema conformance ----

/// Minimal structural validator for the subset of JSON Schema the report
/// schema uses: type, required, properties, enum.
fn validate_node(schema: &Value, value: &Value, path: &str) {
    if let Some(t) = schema["type"].as_str() {
        let ok = match t {
            "object" => value.is_object(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "array" => value.is_array(),
            _ => true,
        };
        assert!(ok, "{path}: expected {t}, got {value}");
    }
    if let Some(options) = schema["enum"].as_array() {
        assert!(options.contains(value), "{path}: {value} not in enum");
    }
    if let Some(required) = schema["required"].as_array() {
        for key in required {
            let key = key.as_str().unwrap();
            assert!(
                value.get(key).is_some(),
                "{path}: missing required field {key}"
            );
        }
    }
    if let Some(props) = schema["properties"].as_object() {
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                validate_node(sub, v, &format!("{path}.{key}"));
            }
        }
    }
}

fn validate_envelope(report: &Value) {
    let schema_text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../schema/report.schema.json"
    ))
    .expect("schema file present");
    let schema: Value = serde_json::from_str(&schema_text).expect("schema parses");
    validate_node(&schema, report, "$");
}

#[test]
fn all_commands_validate_against_schema() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["psi", "--family", "banana", "-n", "2"],
        vec!["class", "--family", "cycle", "-n", "3"],
        vec!["chi", "--family", "cycle", "-n", "3"],
        vec!["check-f1", "--family", "cycle", "-n", "3"],
        vec!["scan", "--max-edges", "2"],
        vec!["arrangement", "--family", "banana", "-n", "3"],
        vec!["lambda", "--family", "banana", "-n", "2"],
        vec!["conf", "--family", "path", "-n", "2", "--dim", "1"],
        vec!["csm", "--family", "banana", "-n", "2"],
        vec!["corpus", "--max-edges", "2"],
    ];
    for args in commands {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_fgraph"))
            .args(&args)
            .output()
            .expect("binary runs");
        let report: Value = serde_json::from_slice(&out.stdout)
            .unwrap_or_else(|e| panic!("{args:?} emitted invalid JSON: {e}"));
        validate_envelope(&report);
    }
}
