//! Acceptance criterion 8: every registry subcommand round-trips its
//! documented example with byte-stable output and the documented exit code.

use std::process::{Command, Output};
use std::time::Instant;

fn realcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs twice, requiring identical bytes and the expected exit code.
fn run_stable(args: &[&str], expect_code: i32) -> String {
    let first = realcover(args);
    let second = realcover(args);
    assert_eq!(
        first.status.code(),
        Some(expect_code),
        "args {args:?}: stderr: {}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(first.stdout, second.stdout, "unstable output for {args:?}");
    assert_eq!(first.status.code(), second.status.code());
    String::from_utf8_lossy(&first.stdout).into_owned()
}

const BUILDING_DATA_PASS: &str = r#"{
    "n": 2, "m": 1,
    "pic": {"free_rank": 1, "torsion": []},
    "L": [1],
    "D": {"1": {"present": true, "class": [2]}},
    "tau": [[1]]
}"#;

const BUILDING_DATA_FAIL: &str = r#"{
    "n": 2, "m": 1,
    "pic": {"free_rank": 1, "torsion": []},
    "L": [1],
    "D": {"1": {"present": true, "class": [2]}},
    "tau": [[-1]]
}"#;

const ABELIAN_DATA_PASS: &str = r#"{
    "group": {"invariant_factors": [2, 2]},
    "M": {"matrix": [[1, 0], [0, 1]]},
    "pic": {"free_rank": 1, "torsion": []},
    "D": {"1,0": {"present": true, "class": [2]}},
    "L": {"0,0": [0], "1,0": [1], "0,1": [0], "1,1": [1]},
    "tau": [[1]]
}"#;

#[test]
fn criterion_8_cli_round_trips() {
    let started = Instant::now();

    let out = run_stable(&["classify-involution", "--n", "12", "--m", "5"], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n1"], 4);
    assert_eq!(v["n2"], 3);
    assert_eq!(v["coarse"]["label"], "split");

    let out = run_stable(&["enumerate-involutions", "--n", "12"], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["involutions"], serde_json::json!([1, 5, 7, 11]));

    let out = run_stable(
        &[
            "analyze-abelian",
            r#"{"group":{"invariant_factors":[4,4]},"M":{"matrix":[[0,1],[1,0]]}}"#,
        ],
        0,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["v"]["invariant_factors"], serde_json::json!([2]));
    assert_eq!(v["compatible_count"], 2);

    let out = run_stable(
        &[
            "enumerate-compatible",
            r#"{"group":{"invariant_factors":[2,2]},"g_plus":[[1,0]],"g_minus":[[1,0]]}"#,
        ],
        0,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["involutions"][0]["matrix"], serde_json::json!([[1, 1], [0, 1]]));

    let out = run_stable(&["case-type", "--n", "8", "--m", "5"], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["type"]["kind"], "twisted");

    let out = run_stable(
        &[
            "build-extension",
            "--case",
            "esoteric",
            "--n",
            "8",
            "--theta",
            "t + 1i",
        ],
        0,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ev"]["num"], "8*t^4 + 8*t^2 + 1");
    assert_eq!(v["checks"]["power_equation"], true);

    let out = run_stable(
        &["check-power", "--n", "2", "--factors", "s1^2*s2^4/t1^2"],
        0,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["verdict"], "reducible");
    assert_eq!(v["result"]["h"], 2);

    let out = run_stable(
        &[
            "fibre-product",
            r#"{"left":{"case":"standard","n":2,"f":"t"},"right":{"case":"standard","n":3,"f":"t+1"}}"#,
        ],
        0,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree"], 6);
    assert_eq!(v["combined_standard"]["num"], "t^5 + 2*t^4 + t^3");

    let out = run_stable(
        &["epsilon-table", "--n", "3", "--i", "1", "--j", "1", "--h", "2"],
        0,
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["entries"][0]["eps"], 1);

    let out = run_stable(&["lchi", BUILDING_DATA_PASS], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["classes"], serde_json::json!([[0], [1]]));

    let out = run_stable(&["verify-building-data", BUILDING_DATA_PASS], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], true);

    // a failing reality verdict exits 1 and reports the failing index
    let out = run_stable(&["verify-building-data", BUILDING_DATA_FAIL], 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], false);
    assert_eq!(v["divisor_reality"]["failing_indices"], serde_json::json!([1]));

    let out = run_stable(&["verify-abelian-data", ABELIAN_DATA_PASS], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], true);

    let out = run_stable(&["epsilon-identities", "--n", "8", "--m", "3"], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["cocycle_quadruples"], 4096);

    assert!(started.elapsed().as_secs() < 5, "criterion 8 over budget");
    println!(
        "[acceptance] criterion 8 (CLI registry round-trips): PASS in {:.2?}",
        started.elapsed()
    );
}

#[test]
fn cli_input_errors_exit_2() {
    // clap rejects unknown subcommands with its usage error
    let out = realcover(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    // a non-involution is an input error
    let out = realcover(&["classify-involution", "--n", "12", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // malformed JSON is an input error
    let out = realcover(&["verify-building-data", "{not json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_domain_rejections_exit_1() {
    // theta = i gives a square norm: no field extension
    let out = realcover(&[
        "build-extension",
        "--case",
        "esoteric",
        "--n",
        "8",
        "--theta",
        "i",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // a non-real standard function is a reality rejection
    let out = realcover(&["build-extension", "--case", "standard", "--n", "2", "--f", "i*t"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cli_text_output_renders() {
    let out = realcover(&["--output", "text", "classify-involution", "--n", "8", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("label: \"esoteric\""));
}
