use std::process::{Command, Output};

fn derivring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derivring"))
        .args(args)
        .env_remove("DERIVRING_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn single_instance_passes() {
    let out = derivring(&["verify", "theorem1", "--n", "2", "--ring", "zmod:5", "--trials", "1", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["instances"], 1);
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["config"]["ring"], "zmod:5");
}

#[test]
fn even_modulus_is_a_configuration_error() {
    let out = derivring(&["verify", "theorem1", "--ring", "zmod:6"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2 is invertible"), "{err}");
}

#[test]
fn small_dimension_and_bad_names_exit_2() {
    assert_eq!(derivring(&["verify", "theorem1", "--n", "1"]).status.code(), Some(2));
    assert_eq!(derivring(&["verify", "theorem9"]).status.code(), Some(2));
    assert_eq!(derivring(&["verify", "theorem1", "--noise", "reexpress"]).status.code(), Some(2));
    assert_eq!(derivring(&["extend", "--ring", "zmod:5", "--delta", "d/dt"]).status.code(), Some(2));
}

#[test]
fn zero_trials_is_an_empty_pass() {
    let out = derivring(&["verify", "jordan-theorem", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["instances"], 0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["verify", "lemma-cross", "--n", "3", "--ring", "poly:zmod:5", "--trials", "20", "--seed", "123"];
    let a = derivring(&args);
    let b = derivring(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_derivring"))
            .args(["verify", "two-generator", "--n", "2", "--trials", "2", "--max-len", "3"])
            .env("DERIVRING_SEED", seed)
            .output()
            .unwrap()
    };
    let report: serde_json::Value = serde_json::from_slice(&run("31").stdout).unwrap();
    assert_eq!(report["config"]["seed"], 31);
}

#[test]
fn extend_verb_reports_checked_and_violations() {
    let out = derivring(&["extend", "--n", "3", "--ring", "poly:zmod:5", "--delta", "t*d/dt", "--trials", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["checked"], 40);
    assert!(report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn report_goes_to_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = derivring(&[
        "verify",
        "jordan-diag",
        "--n",
        "4",
        "--ring",
        "zmod:9",
        "--trials",
        "10",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("jordan-diag over zmod:9 n=4"), "{text}");
    assert!(text.contains("10 instances, 0 failures"));
}
