//! Machine-readable check reports.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// A list of named checks; the verdict is their conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub verdict: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), checks: Vec::new(), verdict: true }
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.verdict &= pass;
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, true, detail);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, false, detail);
    }

    /// Appends all checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.push(format!("{prefix}{}", c.name), c.pass, c.detail);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}: {}", self.command, if self.verdict { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            write!(f, "  [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
