//! JSON-lines reporting: one record object per line on stdout, a human
//! summary on stderr, and a final summary line carrying the exit code.
//! Timestamps never enter records, so replays are byte-identical.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub struct Emitter {
    json: bool,
    progress: bool,
    subcommand: String,
    params: Value,
    records: u64,
    discrepancies: u64,
    failures: u64,
}

impl Emitter {
    pub fn new(json: bool, progress: bool, subcommand: &str, params: Value) -> Self {
        Emitter {
            json,
            progress,
            subcommand: subcommand.to_string(),
            params,
            records: 0,
            discrepancies: 0,
            failures: 0,
        }
    }

    fn emit_line(&self, value: &Value) {
        if self.json {
            let mut out = std::io::stdout().lock();
            serde_json::to_writer(&mut out, value).expect("stdout");
            out.write_all(b"\n").expect("stdout");
        }
    }

    pub fn progress(&self, msg: &str) {
        if self.progress {
            eprintln!("[{}] {msg}", self.subcommand);
        }
    }

    pub fn record<T: Serialize>(&mut self, kind: &str, data: &T) {
        self.records += 1;
        self.emit_line(&json!({
            "type": "record",
            "kind": kind,
            "data": data,
        }));
    }

    /// A machine-readable mismatch between a claimed statement and an exact
    /// computation. Any discrepancy turns the exit code to 1.
    pub fn discrepancy(&mut self, claim: &str, detail: Value) {
        self.discrepancies += 1;
        self.emit_line(&json!({
            "type": "discrepancy",
            "claim": claim,
            "detail": detail,
        }));
        eprintln!("[{}] DISCREPANCY: {claim}", self.subcommand);
    }

    /// A failed verification invariant (not a usage error).
    pub fn failure(&mut self, error: &bindiv_core::Error) {
        self.failures += 1;
        self.emit_line(&json!({
            "type": "failure",
            "error": error.to_string(),
        }));
        eprintln!("[{}] FAILURE: {error}", self.subcommand);
    }

    /// Writes the summary line and returns the process exit code.
    pub fn finish(self) -> i32 {
        let exit_code = if self.discrepancies > 0 || self.failures > 0 {
            EXIT_DISCREPANCY
        } else {
            EXIT_OK
        };
        self.emit_line(&json!({
            "type": "summary",
            "subcommand": self.subcommand,
            "params": self.params,
            "records": self.records,
            "discrepancies": self.discrepancies,
            "failures": self.failures,
            "exit_code": exit_code,
        }));
        eprintln!(
            "[{}] {} records, {} discrepancies, {} failures -> exit {}",
            self.subcommand, self.records, self.discrepancies, self.failures, exit_code
        );
        exit_code
    }
}
