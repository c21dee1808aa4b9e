use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output, Stdio};

use serde_json::Value;
use surewin::cli::{self, Command, ExitStatus};

type Corruption = (&'static str, Box<dyn FnOnce(&mut Value)>);

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// `(command, input path, expected output path)` for every golden case.
fn cases() -> Vec<(Command, PathBuf, PathBuf)> {
    let mut out = Vec::new();
    for command in Command::ALL {
        let dir = golden_dir().join(command.name());
        let mut inputs: Vec<PathBuf> = std::fs::read_dir(&dir)
            .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
            .map(|e| e.unwrap().path())
            .filter(|p| p.to_string_lossy().ends_with(".input.json"))
            .collect();
        inputs.sort();
        assert!(!inputs.is_empty(), "no golden cases for {command}");
        for input in inputs {
            let expected = PathBuf::from(
                input
                    .to_string_lossy()
                    .replace(".input.json", ".output.json"),
            );
            out.push((command, input, expected));
        }
    }
    out
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn binary(args: &[&str], stdin: &str) -> Output {
    let mut child = Process::new(env!("CARGO_BIN_EXE_surewin"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn every_command_matches_its_golden_files() {
    for (command, input, expected) in cases() {
        let out = binary(&[command.name(), "--input", input.to_str().unwrap()], "");
        assert_eq!(out.status.code(), Some(0), "{}", input.display());
        assert_eq!(stdout(&out), read(&expected), "{}", input.display());
    }
}

#[test]
fn check_only_changes_the_verification_status() {
    for (command, input, expected) in cases() {
        let out = cli::run(command, &read(&input), true);
        assert_eq!(out.status, ExitStatus::Verdict, "{}", input.display());
        let mut doc = out.document;
        assert_eq!(doc["verification"], "verified", "{}", input.display());
        doc["verification"] = "unchecked".into();
        assert_eq!(
            cli::render(&doc, false),
            read(&expected),
            "{}",
            input.display()
        );
    }
}

#[test]
fn documents_round_trip_byte_for_byte() {
    for (command, input, expected) in cases() {
        let text = read(&input);
        assert_eq!(
            cli::canonical_instance(command, &text).unwrap(),
            text,
            "{}",
            input.display()
        );
        let verdict = read(&expected);
        assert_eq!(
            cli::canonical_verdict(&verdict).unwrap(),
            verdict,
            "{}",
            expected.display()
        );
    }
}

#[test]
fn repeated_runs_are_identical() {
    for (command, input, _) in cases() {
        let text = read(&input);
        let first = cli::render(&cli::run(command, &text, true).document, true);
        let second = cli::render(&cli::run(command, &text, true).document, true);
        assert_eq!(first, second);
    }
}

#[test]
fn price_example_payload() {
    let out = binary(
        &["price"],
        r#"{"states":["a","b"],"generators":[["1","-1"],["-1","1"]],"claim":["3","1"]}"#,
    );
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["value"], "2");
    assert_eq!(
        doc["primal"],
        serde_json::json!({"alpha": "2", "lambda": ["1", "0"]})
    );
    assert_eq!(doc["dual"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn malformed_rational_is_an_input_error() {
    let out = binary(
        &["price"],
        r#"{"states":["a","b"],"generators":[["1","-1"],["-1","1"]],"claim":["1","x"]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["error"]["message"], "invalid rational at claim[1]");
    assert_eq!(doc["error"]["kind"], "schema");
}

#[test]
fn integers_are_accepted_and_written_as_strings() {
    let out = cli::run(
        Command::SureWin,
        r#"{"states":["a","b"],"generators":[[1,1]]}"#,
        false,
    );
    assert_eq!(out.status, ExitStatus::Verdict);
    assert_eq!(out.document["lambda"], serde_json::json!(["1"]));
    let canonical = cli::canonical_instance(
        Command::SureWin,
        r#"{"generators":[[2,"4/2"]],"states":["a","b"]}"#,
    );
    assert_eq!(
        canonical.unwrap(),
        "{\"generators\":[[\"2\",\"2\"]],\"states\":[\"a\",\"b\"]}\n"
    );
}

#[test]
fn schema_violations_exit_with_one() {
    let cases = [
        (
            Command::SureWin,
            r#"{"states":["a"],"generators":[["1"]],"extra":1}"#,
            "schema",
        ),
        (Command::SureWin, r#"{"states":["a"]}"#, "schema"),
        (
            Command::SureWin,
            r#"{"states":["a"],"generators":[["1"]],"schema_version":2}"#,
            "schema",
        ),
        (
            Command::SureWin,
            r#"{"states":["a"],"generators":[["1.5"]]}"#,
            "schema",
        ),
        (
            Command::SureWin,
            r#"{"states":["a"],"generators":[[1.5]]}"#,
            "schema",
        ),
        (
            Command::SureWin,
            r#"{"states":["a"],"generators":[["1/0"]]}"#,
            "schema",
        ),
        (Command::SureWin, "{", "invalid_json"),
        (
            Command::SureWin,
            r#"{"states":["a","a"],"generators":[]}"#,
            "invalid_instance",
        ),
        (
            Command::Price,
            r#"{"states":["a"],"generators":[],"claim":["1","2"]}"#,
            "invalid_instance",
        ),
        (
            Command::Extend,
            r#"{"states":["a"],"entries":[{"event":["b"],"value":"1"}]}"#,
            "invalid_instance",
        ),
        (
            Command::Riesz,
            r#"{"functional":{"domain":"EA","limit_charge":"1"}}"#,
            "invalid_instance",
        ),
        (
            Command::Riesz,
            r#"{"functional":{"domain":"XX"}}"#,
            "schema",
        ),
        (
            Command::CoreWitness,
            r#"{"states":["a"],"anchors":[{"payoff":["1"],"value":"1"}],"subset":[4]}"#,
            "invalid_instance",
        ),
        (
            Command::Orderly,
            r#"{"h":[{}],"target":{},"dominators":[{"slope":"1"}],"measure":{"limit_charge":"1"}}"#,
            "invalid_instance",
        ),
    ];
    for (command, text, kind) in cases {
        let out = cli::run(command, text, true);
        assert_eq!(out.status, ExitStatus::InputError, "{text}");
        assert_eq!(out.document["error"]["kind"], kind, "{text}");
        assert_eq!(out.document["command"], command.name());
    }
}

#[test]
fn schema_files_exist_for_every_command() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/v1");
    for command in Command::ALL {
        let schema: Value =
            serde_json::from_str(&read(&dir.join(format!("{}.input.json", command.name()))))
                .unwrap();
        assert_eq!(schema["properties"]["schema_version"]["const"], 1);
    }
    for name in ["verdict.json", "error.json", "verify.json"] {
        let _: Value = serde_json::from_str(&read(&dir.join(name))).unwrap();
    }
}

fn corrupt(verdict: &str, edit: impl FnOnce(&mut Value)) -> String {
    let mut doc: Value = serde_json::from_str(verdict).unwrap();
    edit(&mut doc);
    cli::render(&doc, false)
}

fn verify_with_binary(input: &Path, verdict: &str) -> Output {
    let path = std::env::temp_dir().join(format!(
        "surewin-verdict-{}-{}.json",
        std::process::id(),
        rand_suffix()
    ));
    std::fs::write(&path, verdict).unwrap();
    let out = binary(
        &[
            "verify",
            "--input",
            input.to_str().unwrap(),
            "--verdict",
            path.to_str().unwrap(),
        ],
        "",
    );
    let _ = std::fs::remove_file(&path);
    out
}

fn rand_suffix() -> u64 {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    COUNTER.fetch_add(1, Ordering::Relaxed)
}

#[test]
fn genuine_verdicts_verify() {
    for (_, input, expected) in cases() {
        let out = verify_with_binary(&input, &read(&expected));
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}: {}",
            input.display(),
            stdout(&out)
        );
        let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["verification"], "verified");
    }
}

#[test]
fn corrupted_certificates_fail_with_two() {
    let dir = golden_dir();
    let corruptions: Vec<Corruption> = vec![
        (
            "price/hedge_example",
            Box::new(|d: &mut Value| d["dual"] = serde_json::json!(["1", "0"])),
        ),
        (
            "price/hedge_example",
            Box::new(|d: &mut Value| d["primal"]["lambda"] = serde_json::json!(["0", "0"])),
        ),
        (
            "price/hedge_example",
            Box::new(|d: &mut Value| d["value"] = "3/2".into()),
        ),
        (
            "sure-win/single_dominating_generator",
            Box::new(|d: &mut Value| d["lambda"] = serde_json::json!(["1/2"])),
        ),
        (
            "sure-win/fair_bet",
            Box::new(|d: &mut Value| d["probability"] = serde_json::json!(["1", "0"])),
        ),
        (
            "separate/vertices",
            Box::new(|d: &mut Value| d["vertices"][2] = serde_json::json!(["1/3", "1/3", "1/3"])),
        ),
        (
            "extend/overround",
            Box::new(|d: &mut Value| d["stakes"] = serde_json::json!(["-1", "-1"])),
        ),
        (
            "represent/not_positive",
            Box::new(|d: &mut Value| d["payoff"] = serde_json::json!(["2", "0"])),
        ),
        (
            "gamma-eval/midpoint",
            Box::new(|d: &mut Value| d["value"] = "3/5".into()),
        ),
        (
            "core-witness/indicators",
            Box::new(|d: &mut Value| d["lambda_c"] = serde_json::json!(["1", "0"])),
        ),
        (
            "common-extension/two_members",
            Box::new(|d: &mut Value| d["charge"][0][0] = "1".into()),
        ),
        (
            "common-extension/unbounded",
            Box::new(|d: &mut Value| d["ray"] = serde_json::json!([["0"], ["-1"]])),
        ),
        (
            "riesz/slope_charge",
            Box::new(|d: &mut Value| d["evaluation"]["stabilization_index"] = 4.into()),
        ),
        (
            "riesz/slope_charge",
            Box::new(|d: &mut Value| d["perp"]["slope_charge"] = "1".into()),
        ),
        (
            "daniell/limit_charge",
            Box::new(|d: &mut Value| d["limit"] = "1/2".into()),
        ),
        (
            "daniell/slope_charge",
            Box::new(
                |d: &mut Value| *d = serde_json::json!({"command": "daniell", "schema_version": 1, "verdict": "daniell", "verification": "unchecked"}),
            ),
        ),
        (
            "orderly/swapped",
            Box::new(|d: &mut Value| {
                d["monotone"][1] = serde_json::json!({"holds": true, "witness": null})
            }),
        ),
        (
            "orderly/geometric",
            Box::new(|d: &mut Value| d["dominator_integrals"][4] = "0".into()),
        ),
    ];
    for (case, edit) in corruptions {
        let input = dir.join(format!("{case}.input.json"));
        let verdict = corrupt(&read(&dir.join(format!("{case}.output.json"))), edit);
        let out = verify_with_binary(&input, &verdict);
        assert_eq!(out.status.code(), Some(2), "{case}: {}", stdout(&out));
        let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["verification"], "failed", "{case}");
        assert!(doc["verification_error"].is_string());
    }
}

#[test]
fn usage_errors_exit_with_one() {
    let out = binary(&["no-such-command"], "");
    assert_eq!(out.status.code(), Some(1));
    let out = binary(&["price", "--input", "/nonexistent/instance.json"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pretty_output_parses_to_the_same_document() {
    let input = golden_dir().join("riesz/slope_charge.input.json");
    let pretty = binary(
        &["riesz", "--pretty", "--input", input.to_str().unwrap()],
        "",
    );
    let compact = read(&golden_dir().join("riesz/slope_charge.output.json"));
    let a: Value = serde_json::from_str(&stdout(&pretty)).unwrap();
    let b: Value = serde_json::from_str(&compact).unwrap();
    assert_eq!(a, b);
    assert!(stdout(&pretty).contains("\n  "));
}
