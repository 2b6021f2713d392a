//! Structured command results, renderable as text or JSON from the same data.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }

    /// Process exit code: 0 pass, 1 mathematical failure, 2 usage/parse error.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FindingKind {
    /// A computed value.
    Info,
    /// A failed mathematical check.
    Violation,
    /// The command could not run.
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    /// Short machine-readable key, e.g. `dim` or `axiom`.
    pub key: String,
    /// The exact line printed in text mode.
    pub message: String,
    /// Structured payload for JSON consumers.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub status: Status,
    pub findings: Vec<Finding>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            status: Status::Pass,
            findings: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    fn push(&mut self, kind: FindingKind, key: &str, message: String, data: serde_json::Value) {
        self.findings.push(Finding {
            kind,
            key: key.to_string(),
            message,
            data,
        });
        self.status = self.derive_status();
    }

    pub fn info(&mut self, key: &str, message: impl Into<String>) {
        self.push(
            FindingKind::Info,
            key,
            message.into(),
            serde_json::Value::Null,
        );
    }

    pub fn info_with(&mut self, key: &str, message: impl Into<String>, data: impl Serialize) {
        let data = serde_json::to_value(data).expect("serializable payload");
        self.push(FindingKind::Info, key, message.into(), data);
    }

    pub fn violation(&mut self, key: &str, message: impl Into<String>, data: impl Serialize) {
        let data = serde_json::to_value(data).expect("serializable payload");
        self.push(FindingKind::Violation, key, message.into(), data);
    }

    pub fn error(&mut self, key: &str, message: impl Into<String>) {
        self.push(
            FindingKind::Error,
            key,
            message.into(),
            serde_json::Value::Null,
        );
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.elapsed_ms = d.as_secs_f64() * 1000.0;
    }

    fn derive_status(&self) -> Status {
        if self.findings.iter().any(|f| f.kind == FindingKind::Error) {
            Status::Error
        } else if self
            .findings
            .iter()
            .any(|f| f.kind == FindingKind::Violation)
        {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.kind == FindingKind::Violation)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            let prefix = match f.kind {
                FindingKind::Info => "",
                FindingKind::Violation => "VIOLATION: ",
                FindingKind::Error => "error: ",
            };
            let _ = writeln!(out, "{prefix}{}", f.message);
        }
        out
    }

    /// Summary line; the CLI prints it to stderr so stdout stays pipeable.
    pub fn status_line(&self) -> String {
        format!(
            "status: {} ({:.1} ms)",
            self.status.as_str(),
            self.elapsed_ms
        )
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report") + "\n"
    }
}
