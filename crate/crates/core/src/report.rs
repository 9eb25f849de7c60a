//! Check-report types shared by the validation and verification layers.
//!
//! Failures are report entries, not exceptions: a check always produces a
//! [`CheckResult`] with the two compared quantities, the tolerance used,
//! and a witness description when something concrete can be pointed at.

use serde::{Deserialize, Serialize};

/// Outcome of a single named check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The law being checked, written out (e.g. `"P(D1 n D2) = P(D1) P(D2)"`).
    pub identity: String,
    pub pass: bool,
    /// Left/right quantities that were compared. For matrix identities this
    /// is the maximal absolute deviation against zero.
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    /// A check comparing two scalars for equality within `tol`.
    pub fn scalar_eq(name: &str, identity: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            identity: identity.to_string(),
            pass: (lhs - rhs).abs() <= tol,
            lhs,
            rhs,
            tolerance: tol,
            witness: None,
        }
    }

    /// A check asserting `lhs <= rhs + tol`.
    pub fn scalar_leq(name: &str, identity: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            identity: identity.to_string(),
            pass: lhs <= rhs + tol,
            lhs,
            rhs,
            tolerance: tol,
            witness: None,
        }
    }

    /// A check whose measured quantity is a deviation that must vanish.
    pub fn deviation(name: &str, identity: &str, deviation: f64, tol: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            identity: identity.to_string(),
            pass: deviation <= tol,
            lhs: deviation,
            rhs: 0.0,
            tolerance: tol,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

/// A list of named check results with an overall verdict.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }
}
