//! Verification reports shared by the quantum and classical checks.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    #[serde(rename = "residual_rendered")]
    pub residual: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn new(label: impl Into<String>, expected: String, actual: String, residual: String) -> Self {
        let pass = residual == "0";
        Check {
            label: label.into(),
            pass,
            residual,
            expected,
            actual,
        }
    }

    /// A check whose outcome is decided by the caller rather than by a residual.
    pub fn flag(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        Check {
            label: label.into(),
            pass,
            residual: if pass { "0".into() } else { detail.clone() },
            expected: String::new(),
            actual: detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub level: String,
    pub checks: Vec<Check>,
    pub overall: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, level: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            level: level.into(),
            checks: Vec::new(),
            overall: true,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.overall &= check.pass;
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Appends another report's checks, prefixing their labels.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.label = format!("{prefix}: {}", c.label);
            }
            self.push(c);
        }
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }

    /// Orders checks by label so that parallel runs give identical reports.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.label.cmp(&b.label));
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (level {})", self.suite, self.level)?;
        for c in &self.checks {
            let tag = if c.pass { "ok  " } else { "FAIL" };
            writeln!(f, "  {tag} {}", c.label)?;
            if !c.pass {
                if !c.expected.is_empty() {
                    writeln!(f, "       expected: {}", c.expected)?;
                }
                writeln!(f, "       actual:   {}", c.actual)?;
                writeln!(f, "       residual: {}", c.residual)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        write!(
            f,
            "{}: {passed}/{} checks passed",
            if self.overall { "PASS" } else { "FAIL" },
            self.checks.len()
        )
    }
}
