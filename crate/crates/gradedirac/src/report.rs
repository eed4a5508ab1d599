//! Run reports. The structured form is the serialized [`Report`]; the text
//! form is rendered from it.

use std::fmt::Write;

use serde::Serialize;

use crate::error::Pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub value: String,
}

impl Witness {
    pub fn new(label: impl Into<String>, value: impl Into<String>) -> Self {
        Witness {
            label: label.into(),
            value: value.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectiveReport {
    pub line: usize,
    pub column: usize,
    /// `check` or `compute`.
    pub kind: &'static str,
    pub directive: String,
    pub status: Status,
    pub summary: String,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Warning {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Warning {
            line: pos.line,
            column: pos.col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub cases: usize,
    pub status: Status,
    pub warnings: Vec<Warning>,
    pub results: Vec<DirectiveReport>,
}

impl Report {
    pub fn new(
        seed: u64,
        cases: usize,
        warnings: Vec<Warning>,
        results: Vec<DirectiveReport>,
    ) -> Self {
        let status = overall(results.iter().map(|r| r.status));
        Report {
            seed,
            cases,
            status,
            warnings,
            results,
        }
    }

    /// 0 when everything passes, 1 on any failure, 2 when something is inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for w in &self.warnings {
            let _ = writeln!(s, "{}:{}: warning: {}", w.line, w.column, w.message);
        }
        for r in &self.results {
            let _ = writeln!(
                s,
                "{}:{}: {} {}: {}",
                r.line,
                r.column,
                r.kind,
                r.directive,
                r.status.as_str()
            );
            if !r.summary.is_empty() {
                let _ = writeln!(s, "    {}", r.summary);
            }
            for w in &r.witnesses {
                let _ = writeln!(s, "    {} = {}", w.label, w.value);
            }
            if let Some(t) = r.timing_ms {
                let _ = writeln!(s, "    time = {t} ms");
            }
        }
        let n = |st: Status| self.results.iter().filter(|r| r.status == st).count();
        let _ = writeln!(
            s,
            "{}: {} passed, {} failed, {} inconclusive",
            self.status.as_str(),
            n(Status::Pass),
            n(Status::Fail),
            n(Status::Inconclusive)
        );
        s
    }
}

/// Fail dominates inconclusive, which dominates pass.
pub fn overall(statuses: impl IntoIterator<Item = Status>) -> Status {
    statuses.into_iter().max().unwrap_or(Status::Pass)
}
