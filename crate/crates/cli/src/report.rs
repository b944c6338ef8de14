//! Run reports: one JSON document per invocation, deterministic for a
//! fixed (input, seed, flags) triple. Timing never enters the report; it
//! goes to standard error with the human summary.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use crate::error::CliError;
use crate::files;

/// What the command concluded. `Pass` and `Done` exit 0 (`Done` marks
/// pure constructions that claim nothing); `Fail` is a clean "no" with a
/// witness in the results and exits 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Done,
}

impl Verdict {
    pub fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Done => "done",
        }
    }

    fn code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Done => 0,
            Verdict::Fail => 1,
        }
    }
}

/// A command's verdict, JSON results, and human summary lines.
pub struct Outcome {
    pub verdict: Verdict,
    pub results: Value,
    pub summary: Vec<String>,
}

/// One input file as it appears in the report.
pub fn input_entry(path: &std::path::Path, digest: &str) -> Value {
    json!({"path": path.display().to_string(), "sha256": digest})
}

/// Assembles the report, writes it to `--out` or standard output, prints
/// the summary and timing to standard error, and returns the exit code.
pub fn emit(
    command: &str,
    inputs: Vec<Value>,
    seed: Option<u64>,
    outcome: Outcome,
    out: &Option<PathBuf>,
    started: Instant,
) -> Result<i32, CliError> {
    let report = json!({
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "verdict": outcome.verdict.label(),
        "results": outcome.results,
    });
    let text = files::canonical_json(&report);
    match out {
        Some(path) => files::write_text(path, &text)?,
        None => print!("{text}"),
    }
    for line in &outcome.summary {
        eprintln!("{command}: {line}");
    }
    eprintln!(
        "{command}: verdict {}, elapsed {:.3?}",
        outcome.verdict.label(),
        started.elapsed()
    );
    Ok(outcome.verdict.code())
}
