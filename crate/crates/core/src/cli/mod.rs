//! JSON front end: instance documents in, verdict documents with
//! certificates out.
//!
//! Every document carries `schema_version`; verdicts add `command`, a
//! `verdict` tag and a `verification` status. Keys are sorted and rationals
//! are reduced `"p/q"` strings, so output is byte-stable.

mod input;
mod json;
mod verdict;

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::Error;

pub use input::Instance;
pub use json::Rat;
pub use verdict::{Evaluation, Verdict, DANIELL_WINDOW};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    SureWin,
    Price,
    Separate,
    Extend,
    Represent,
    GammaEval,
    CoreWitness,
    CommonExtension,
    Riesz,
    Daniell,
    Orderly,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::SureWin,
        Command::Price,
        Command::Separate,
        Command::Extend,
        Command::Represent,
        Command::GammaEval,
        Command::CoreWitness,
        Command::CommonExtension,
        Command::Riesz,
        Command::Daniell,
        Command::Orderly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SureWin => "sure-win",
            Command::Price => "price",
            Command::Separate => "separate",
            Command::Extend => "extend",
            Command::Represent => "represent",
            Command::GammaEval => "gamma-eval",
            Command::CoreWitness => "core-witness",
            Command::CommonExtension => "common-extension",
            Command::Riesz => "riesz",
            Command::Daniell => "daniell",
            Command::Orderly => "orderly",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

/// Process exit status of one invocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    /// A verdict was produced, whichever alternative it is.
    Verdict = 0,
    /// The input was malformed or violated the instance constraints.
    InputError = 1,
    /// An internal invariant or a certificate check failed.
    Failure = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub status: ExitStatus,
}

impl CliError {
    pub(crate) fn json(message: String) -> Self {
        CliError {
            kind: "invalid_json",
            message,
            status: ExitStatus::InputError,
        }
    }

    pub(crate) fn schema(message: String) -> Self {
        CliError {
            kind: "schema",
            message,
            status: ExitStatus::InputError,
        }
    }

    pub(crate) fn internal(message: String) -> Self {
        CliError {
            kind: "internal",
            message,
            status: ExitStatus::Failure,
        }
    }

    pub(crate) fn from_library(e: Error) -> Self {
        match e {
            Error::Internal(message) => CliError::internal(message),
            other => CliError {
                kind: "invalid_instance",
                message: other.to_string(),
                status: ExitStatus::InputError,
            },
        }
    }
}

/// A document to print and the exit status to return.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub document: Value,
    pub status: ExitStatus,
}

impl Outcome {
    fn error(command: &str, e: CliError) -> Self {
        let document = json!({
            "command": command,
            "schema_version": SCHEMA_VERSION,
            "error": { "kind": e.kind, "message": e.message },
        });
        Outcome {
            document,
            status: e.status,
        }
    }
}

fn envelope(
    command: Command,
    mut payload: Map<String, Value>,
    verification: &str,
) -> Map<String, Value> {
    payload.insert("command".into(), command.name().into());
    payload.insert("schema_version".into(), SCHEMA_VERSION.into());
    payload.insert("verification".into(), verification.into());
    payload
}

/// Independently re-checks an emitted verdict document against its instance.
fn check_document(command: Command, instance: &Instance, doc: &Value) -> Result<(), String> {
    let r = doc.as_object().ok_or("verdict document is not an object")?;
    if r.get("command").and_then(Value::as_str) != Some(command.name()) {
        return Err("command field does not match".into());
    }
    if r.get("schema_version").and_then(Value::as_u64) != Some(SCHEMA_VERSION) {
        return Err("unsupported schema_version in verdict".into());
    }
    let parsed = verdict::from_json(command, doc)?;
    verdict::check(instance, &parsed)
}

/// Runs `command` on the instance text. With `check`, the serialized verdict is
/// parsed back and every certificate re-verified before it is returned.
pub fn run(command: Command, text: &str, check: bool) -> Outcome {
    let instance = match input::document(text).and_then(|v| input::instance(command, v)) {
        Ok(i) => i,
        Err(e) => return Outcome::error(command.name(), e),
    };
    let result = match verdict::solve(&instance) {
        Ok(v) => v,
        Err(e) => return Outcome::error(command.name(), CliError::from_library(e)),
    };
    let payload = verdict::to_json(&result);
    if !check {
        return Outcome {
            document: Value::Object(envelope(command, payload, "unchecked")),
            status: ExitStatus::Verdict,
        };
    }
    let candidate = Value::Object(envelope(command, payload.clone(), "pending"));
    match check_document(command, &instance, &candidate) {
        Ok(()) => Outcome {
            document: Value::Object(envelope(command, payload, "verified")),
            status: ExitStatus::Verdict,
        },
        Err(reason) => {
            let mut doc = envelope(command, payload, "failed");
            doc.insert("verification_error".into(), reason.into());
            Outcome {
                document: Value::Object(doc),
                status: ExitStatus::Failure,
            }
        }
    }
}

/// Re-verifies a verdict document produced earlier (possibly by someone else)
/// against the instance it answers. The command is read from the verdict.
pub fn verify(instance_text: &str, verdict_text: &str) -> Outcome {
    let doc: Value = match serde_json::from_str(verdict_text) {
        Ok(v) => v,
        Err(e) => return Outcome::error("verify", CliError::json(format!("verdict: {e}"))),
    };
    let command = match doc
        .get("command")
        .and_then(Value::as_str)
        .map(Command::from_str)
    {
        Some(Ok(c)) => c,
        Some(Err(e)) => return Outcome::error("verify", CliError::schema(e)),
        None => {
            return Outcome::error(
                "verify",
                CliError::schema("verdict has no command field".into()),
            )
        }
    };
    let instance = match input::document(instance_text).and_then(|v| input::instance(command, v)) {
        Ok(i) => i,
        Err(e) => return Outcome::error("verify", e),
    };
    let (verification, status, reason) = match check_document(command, &instance, &doc) {
        Ok(()) => ("verified", ExitStatus::Verdict, None),
        Err(reason) => ("failed", ExitStatus::Failure, Some(reason)),
    };
    let mut out = json!({
        "command": "verify",
        "schema_version": SCHEMA_VERSION,
        "target": command.name(),
        "verification": verification,
    });
    if let Some(reason) = reason {
        out["verification_error"] = reason.into();
    }
    Outcome {
        document: out,
        status,
    }
}

/// The instance in canonical form (sorted keys, reduced rational strings).
pub fn canonical_instance(command: Command, text: &str) -> Result<String, CliError> {
    let value = input::document(text).and_then(|v| input::canonical(command, v))?;
    Ok(render(&value, false))
}

/// Parses a verdict document into typed form and writes it back out.
pub fn canonical_verdict(text: &str) -> Result<String, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let command: Command = doc
        .get("command")
        .and_then(Value::as_str)
        .ok_or("missing command")?
        .parse()?;
    let verification = doc
        .get("verification")
        .and_then(Value::as_str)
        .ok_or("missing verification")?;
    let parsed = verdict::from_json(command, &doc)?;
    Ok(render(
        &Value::Object(envelope(command, verdict::to_json(&parsed), verification)),
        false,
    ))
}

/// Compact or indented JSON with a trailing newline.
pub fn render(value: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("JSON values always serialize");
    s.push('\n');
    s
}
