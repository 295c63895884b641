//! Structured results of verification suites.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub label: String,
    pub status: Status,
    /// Nonzero witness in the scalar/polynomial grammar, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub timing_ms: f64,
}

impl CheckItem {
    pub fn pass(label: impl Into<String>) -> Self {
        CheckItem {
            label: label.into(),
            status: Status::Pass,
            residual: None,
            timing_ms: 0.0,
        }
    }

    pub fn fail(label: impl Into<String>, residual: impl Into<String>) -> Self {
        CheckItem {
            label: label.into(),
            status: Status::Fail,
            residual: Some(residual.into()),
            timing_ms: 0.0,
        }
    }

    pub fn error(label: impl Into<String>, message: impl Into<String>) -> Self {
        CheckItem {
            label: label.into(),
            status: Status::Error,
            residual: Some(message.into()),
            timing_ms: 0.0,
        }
    }

    /// PASS when `residual` is `None`, FAIL with the witness otherwise.
    pub fn from_residual(label: impl Into<String>, residual: Option<String>) -> Self {
        match residual {
            None => Self::pass(label),
            Some(r) => Self::fail(label, r),
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_secs_f64() * 1000.0;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub status: Status,
    pub items: Vec<CheckItem>,
    pub version: String,
    pub bindings: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport {
            suite: suite.into(),
            status: Status::Pass,
            items: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            bindings: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
        self.status = self.computed_status();
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Appends another report's items, prefixing their labels.
    pub fn absorb(&mut self, other: CheckReport) {
        let was_empty = other.items.is_empty();
        for mut item in other.items {
            item.label = format!("{}: {}", other.suite, item.label);
            self.items.push(item);
        }
        for n in other.notes {
            self.notes.push(format!("{}: {}", other.suite, n));
        }
        if other.status == Status::Error && was_empty {
            self.items.push(CheckItem::error(other.suite, "suite error"));
        }
        self.status = self.computed_status();
    }

    fn computed_status(&self) -> Status {
        if self.items.iter().any(|i| i.status == Status::Error) {
            Status::Error
        } else if self.items.iter().all(|i| i.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| i.status != Status::Pass)
    }

    pub fn item(&self, label: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.label == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with every timing zeroed, for byte-level comparisons.
    pub fn to_json_untimed(&self) -> String {
        let mut r = self.clone();
        for i in &mut r.items {
            i.timing_ms = 0.0;
        }
        r.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}: {}\n", self.suite, self.status);
        if !self.bindings.is_empty() {
            let b: Vec<String> = self
                .bindings
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!("bindings: {}\n", b.join(", ")));
        }
        for i in &self.items {
            out.push_str(&format!("  [{}] {}", i.status, i.label));
            if let Some(r) = &i.residual {
                out.push_str(&format!("\n      residual: {r}"));
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_items() {
        let mut r = CheckReport::new("x");
        assert!(r.passed());
        r.push(CheckItem::pass("a"));
        assert!(r.passed());
        r.push(CheckItem::fail("b", "u - 1"));
        assert_eq!(r.status, Status::Fail);
        r.push(CheckItem::error("c", "boom"));
        assert_eq!(r.status.exit_code(), 2);
    }

    #[test]
    fn json_round_trip() {
        let mut r = CheckReport::new("ybe");
        r.push(CheckItem::fail("entry (1,1)", "s"));
        r.bindings.insert("q".into(), "u^2".into());
        let back: CheckReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
