//! Machine-readable check reports shared by every validator.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub witness: String,
}

/// Outcome of a check or verification suite. `pass` holds iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub ms: u128,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            pass: true,
            violations: Vec::new(),
            ms: 0,
        }
    }

    pub fn violation(&mut self, kind: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation {
            kind: kind.into(),
            witness: witness.into(),
        });
        self.pass = false;
    }

    /// Folds another report's violations into this one, prefixing their kinds.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for v in other.violations {
            self.violation(format!("{prefix}/{}", v.kind), v.witness);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}
