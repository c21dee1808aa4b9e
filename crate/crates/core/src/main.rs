use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use surewin::cli::{self, Command, ExitStatus};

#[derive(Parser)]
#[command(
    name = "surewin",
    version,
    about = "Exact coherence, pricing and representation certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Instance document; stdin when omitted.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Re-verify every certificate before printing.
    #[arg(long)]
    check: bool,
    /// Indented output.
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Sub {
    /// Sure win in the cone, or a separating probability.
    SureWin(Common),
    /// Superhedging price of a claim, with the cheapest hedge and a pricing probability.
    Price(Common),
    /// A separating probability and, on request, all vertices of their polytope.
    Separate(Common),
    /// Extension of event probabilities to a probability, or a sure win.
    Extend(Common),
    /// Representing charge of a linear functional, or a positivity violation.
    Represent(Common),
    /// Concave integral generated by anchors.
    GammaEval(Common),
    /// Core element attaining the supremum over the hull of an anchor subset.
    CoreWitness(Common),
    /// Common extension of a family of functionals on a product space.
    CommonExtension(Common),
    /// Decomposition of a positive functional on the naturals.
    Riesz(Common),
    /// Continuity from above of a positive functional on the naturals.
    Daniell(Common),
    /// Orderly convergence checks on a finite stretch of a sequence.
    Orderly(Common),
    /// Re-verify a verdict document against its instance.
    Verify {
        /// Instance document; stdin when omitted.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Verdict document to check.
        #[arg(long, value_name = "FILE")]
        verdict: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
}

fn read(path: Option<&Path>) -> io::Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn emit(document: &serde_json::Value, pretty: bool, status: ExitStatus) -> ExitCode {
    let mut out = io::stdout().lock();
    if out
        .write_all(cli::render(document, pretty).as_bytes())
        .is_err()
    {
        return ExitCode::from(ExitStatus::Failure.code() as u8);
    }
    ExitCode::from(status.code() as u8)
}

fn io_error(command: &str, what: &str, e: io::Error, pretty: bool) -> ExitCode {
    let doc = json!({
        "command": command,
        "schema_version": cli::SCHEMA_VERSION,
        "error": { "kind": "io", "message": format!("{what}: {e}") },
    });
    emit(&doc, pretty, ExitStatus::InputError)
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (command, common) = match parsed.command {
        Sub::Verify {
            input,
            verdict,
            pretty,
        } => {
            let instance = match read(input.as_deref()) {
                Ok(s) => s,
                Err(e) => return io_error("verify", "instance", e, pretty),
            };
            let verdict = match read(Some(&verdict)) {
                Ok(s) => s,
                Err(e) => return io_error("verify", "verdict", e, pretty),
            };
            let outcome = cli::verify(&instance, &verdict);
            return emit(&outcome.document, pretty, outcome.status);
        }
        Sub::SureWin(c) => (Command::SureWin, c),
        Sub::Price(c) => (Command::Price, c),
        Sub::Separate(c) => (Command::Separate, c),
        Sub::Extend(c) => (Command::Extend, c),
        Sub::Represent(c) => (Command::Represent, c),
        Sub::GammaEval(c) => (Command::GammaEval, c),
        Sub::CoreWitness(c) => (Command::CoreWitness, c),
        Sub::CommonExtension(c) => (Command::CommonExtension, c),
        Sub::Riesz(c) => (Command::Riesz, c),
        Sub::Daniell(c) => (Command::Daniell, c),
        Sub::Orderly(c) => (Command::Orderly, c),
    };
    let text = match read(common.input.as_deref()) {
        Ok(s) => s,
        Err(e) => return io_error(command.name(), "input", e, common.pretty),
    };
    let outcome = cli::run(command, &text, common.check);
    emit(&outcome.document, common.pretty, outcome.status)
}
