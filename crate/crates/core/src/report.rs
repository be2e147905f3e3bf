//! Pass/fail records shared by every check suite.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub relation: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes iff `residual ≤ tolerance` (NaN fails).
    pub fn residual(relation: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check { relation: relation.into(), residual, tolerance, pass: residual <= tolerance, detail: None }
    }

    /// A yes/no outcome; residual 0 on success, 1 otherwise.
    pub fn flag(relation: impl Into<String>, ok: bool) -> Self {
        Check { relation: relation.into(), residual: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, pass: ok, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: residual {:.3e} (tol {:.1e})",
            if self.pass { "ok" } else { "FAIL" },
            self.relation,
            self.residual,
            self.tolerance
        )?;
        if let Some(d) = &self.detail {
            write!(f, " — {d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, relation: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.relation == relation)
    }

    /// The same checks with `prefix` prepended to every relation name.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.relation.insert_str(0, prefix);
        }
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
