//! End-to-end tests of the `gword` binary: report shape, exit codes, and
//! the bundled data files.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

use gword::{hijo_example, read_matrix, MatrixData};

fn gword_bin(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gword"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("process exits normally");
    let stdout = String::from_utf8(out.stdout).expect("stdout is utf8");
    let stderr = String::from_utf8(out.stderr).expect("stderr is utf8");
    let report = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout).expect("stdout is a JSON report")
    };
    (code, report, stderr)
}

fn data_file(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn classify_flags_the_commutator_pattern() {
    let (code, report, _) = gword_bin(&["classify", "A B A^-1 B^-1"]);
    assert_eq!(code, 1, "a provably bad pattern is a finding");
    let results = &report["results"];
    assert_eq!(results["verdict"], "ProvablyBad");
    assert_eq!(results["reduced_class_m"], 2);
    assert_eq!(results["theorems"][0], "not2good");
    assert!(results["witness_family"]
        .as_str()
        .expect("witness family present")
        .starts_with("epsilon("));
}

#[test]
fn classify_accepts_uniform_sign_patterns() {
    let (code, report, _) = gword_bin(&["classify", "A B A^-2 B^3"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["verdict"], "ProvablyGood");
}

#[test]
fn eval_exact_refutes_the_bundled_counterexample() {
    let (code, report, _) = gword_bin(&[
        "eval",
        "A B A^2 B^2",
        &data_file("eq2_a.json"),
        &data_file("eq2_b.json"),
        "--exact",
    ]);
    assert_eq!(code, 1);
    let results = &report["results"];
    assert_eq!(results["verdict"], "NotAllPositive");
    assert_eq!(results["trace"], "-3164");
    assert_eq!(results["certificate"]["kind"], "negative-trace");
}

#[test]
fn eval_float_agrees_on_the_bundled_counterexample() {
    let (code, report, _) = gword_bin(&[
        "eval",
        "A B A^2 B^2",
        &data_file("eq2_a.json"),
        &data_file("eq2_b.json"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(report["results"]["verdict"], "NotAllPositive");
    assert_eq!(report["results"]["mode"], "float");
}

#[test]
fn bundled_data_matches_the_reference_pair() {
    let a = read_matrix(Path::new(&data_file("eq2_a.json"))).expect("A loads");
    let b = read_matrix(Path::new(&data_file("eq2_b.json"))).expect("B loads");
    let (ra, rb) = hijo_example();
    assert_eq!(a, MatrixData::Rational(ra));
    assert_eq!(b, MatrixData::Rational(rb));
}

#[test]
fn verify_identities_passes() {
    let (code, report, _) = gword_bin(&["verify", "identities"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["passed"], true);
}

#[test]
fn every_registered_suite_runs_and_unknown_names_are_usage_errors() {
    let suites = [
        "class1", "thm-n2", "thm-n3", "thm-2eig", "thfour", "not2good", "identities",
    ];
    for suite in suites {
        let (code, report, _) = gword_bin(&["verify", suite]);
        assert_ne!(code, 2, "suite {suite} must be registered");
        assert_eq!(report["results"]["suite"], suite);
    }
    let (code, _, stderr) = gword_bin(&["verify", "nosuch"]);
    assert_eq!(code, 2);
    for suite in suites {
        assert!(
            stderr.contains(suite),
            "usage error must list suite {suite}"
        );
    }
}

#[test]
fn classifier_tags_name_registered_suites() {
    let mut tags = Vec::new();
    for word in ["A B", "A B A^2 B^2", "A B A^-1 B^-1"] {
        let (_, report, _) = gword_bin(&["classify", word]);
        for tag in report["results"]["theorems"].as_array().expect("tags") {
            tags.push(tag.as_str().expect("tag is a string").to_string());
        }
    }
    assert!(!tags.is_empty());
    for tag in tags {
        let (code, _, _) = gword_bin(&["verify", &tag]);
        assert_ne!(code, 2, "classifier tag {tag} must be a registered suite");
    }
}

#[test]
fn reduce_reports_the_cancellation_trace() {
    let (code, report, _) = gword_bin(&["reduce", "A B A^-1 B^2 A B^-1"]);
    assert_eq!(code, 0);
    let results = &report["results"];
    assert_eq!(results["class_n"], 3);
    let steps = results["steps"].as_array().expect("steps");
    assert!(!steps.is_empty(), "the cyclic alpha rule applies here");
    assert!(results["reduced_class_m"].as_u64().expect("m") < 3);
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let (code, _, stderr) = gword_bin(&["classify", "A B^0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error:"));

    let (code, _, _) = gword_bin(&["eval", "A B", "/nonexistent.json", "/nonexistent.json"]);
    assert_eq!(code, 2);

    let (code, _, _) = gword_bin(&["witness", "A B", "--recipe", "hijo-eq2"]);
    assert_eq!(code, 2);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.json");
    let (code, report, _) = gword_bin(&[
        "classify",
        "A B A^3 B^2",
        "--out",
        path.to_str().expect("utf8 path"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report, Value::Null, "report goes to the file, not stdout");
    let text = std::fs::read_to_string(&path).expect("report file written");
    let parsed: Value = serde_json::from_str(&text).expect("file holds JSON");
    assert_eq!(parsed["results"]["verdict"], "ProvablyGood");
}

#[test]
fn witness_report_carries_seed_and_recipe() {
    let (code, report, _) = gword_bin(&["witness", "A B A^2 B^2", "--seed", "5"]);
    assert_eq!(code, 1);
    assert_eq!(report["seed"], 5);
    assert_eq!(report["results"]["recipe"], "hijo-eq2");
    assert_eq!(report["results"]["certified"], true);
    let witness = &report["results"]["witness"];
    assert_eq!(witness["a"]["mode"], "rational");
    assert_eq!(witness["certificate"]["kind"], "negative-trace");
}

#[test]
fn witness_auto_falls_back_to_search_on_unknown_patterns() {
    let (code, report, _) = gword_bin(&[
        "witness",
        "A B A^-1 B^-1 A B A^-1 B^-1",
        "--seed",
        "3",
    ]);
    assert!(code == 0 || code == 1);
    assert_eq!(report["results"]["recipe"], "search");
    assert!(report["results"]["search"].is_object());
}

#[test]
fn search_reports_echo_inputs_and_conclusion() {
    let (code, report, _) = gword_bin(&[
        "search",
        "A B A^-2 B^3",
        "--n",
        "2",
        "--trials",
        "50",
        "--seed",
        "9",
    ]);
    assert_eq!(code, 0, "a provably good word yields no witness");
    let results = &report["results"];
    assert_eq!(results["trials"], 50);
    assert_eq!(results["dimension"], 2);
    assert_eq!(
        results["conclusion"],
        "positivity not refuted in 50 trials"
    );
    assert!(results["witness"].is_null());
    assert!(report["wall_time_ms"].is_number());
}
