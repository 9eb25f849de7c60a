//! Verification reports: per-case entries plus summary counts, with
//! deterministic ordering by (suite, instance, check name).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::SCHEMA_VERSION;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEntry {
    pub suite: String,
    pub instance: String,
    pub name: String,
    /// The law being checked, written out.
    pub identity: String,
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReportSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub by_suite: BTreeMap<String, SuiteSummary>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub seed: u64,
    pub tolerance: f64,
    pub entries: Vec<ReportEntry>,
    pub summary: ReportSummary,
}

impl VerificationReport {
    /// Order entries deterministically and recompute the summary so the
    /// counts always match.
    pub fn assemble(seed: u64, tolerance: f64, mut entries: Vec<ReportEntry>) -> Self {
        entries.sort_by(|a, b| {
            (a.suite.as_str(), a.instance.as_str(), a.name.as_str()).cmp(&(
                b.suite.as_str(),
                b.instance.as_str(),
                b.name.as_str(),
            ))
        });
        let mut summary = ReportSummary::default();
        for entry in &entries {
            summary.total += 1;
            let suite = summary.by_suite.entry(entry.suite.clone()).or_default();
            suite.total += 1;
            if entry.pass {
                summary.passed += 1;
                suite.passed += 1;
            } else {
                summary.failed += 1;
            }
        }
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            seed,
            tolerance,
            entries,
            summary,
        }
    }

    pub fn pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// Human-readable rendering: summary per suite, then every failure.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "seed {}  tolerance {:e}  checks {}  passed {}  failed {}\n",
            self.seed, self.tolerance, self.summary.total, self.summary.passed, self.summary.failed
        ));
        for (suite, counts) in &self.summary.by_suite {
            out.push_str(&format!(
                "  {:<12} {:>5}/{:<5} {}\n",
                suite,
                counts.passed,
                counts.total,
                if counts.passed == counts.total {
                    "ok"
                } else {
                    "FAILED"
                }
            ));
        }
        for entry in self.entries.iter().filter(|e| !e.pass) {
            out.push_str(&format!(
                "FAIL {}/{} {}: {} (lhs {}, rhs {}, tol {:e}){}\n",
                entry.suite,
                entry.instance,
                entry.name,
                entry.identity,
                entry.lhs,
                entry.rhs,
                entry.tolerance,
                entry
                    .witness
                    .as_ref()
                    .map(|w| format!(" witness: {w}"))
                    .unwrap_or_default()
            ));
        }
        out
    }
}
