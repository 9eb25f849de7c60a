//! Verification configuration: which suites to run over which generated
//! corpus, with deterministic seeding and a global tolerance.

use serde::{Deserialize, Serialize};

use latspec::NormKind;

pub const SCHEMA_VERSION: u32 = 1;

/// The ten verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Definition,
    Norms,
    Monotone,
    Commutant,
    Subalgebra,
    Riesz,
    Regularity,
    Retrieval,
    Roundtrip,
    Continuity,
}

impl Suite {
    pub fn all() -> Vec<Suite> {
        vec![
            Suite::Definition,
            Suite::Norms,
            Suite::Monotone,
            Suite::Commutant,
            Suite::Subalgebra,
            Suite::Riesz,
            Suite::Regularity,
            Suite::Retrieval,
            Suite::Roundtrip,
            Suite::Continuity,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Definition => "definition",
            Suite::Norms => "norms",
            Suite::Monotone => "monotone",
            Suite::Commutant => "commutant",
            Suite::Subalgebra => "subalgebra",
            Suite::Riesz => "riesz",
            Suite::Regularity => "regularity",
            Suite::Retrieval => "retrieval",
            Suite::Roundtrip => "roundtrip",
            Suite::Continuity => "continuity",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::all()
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Harness configuration; every field has a default, so a partial JSON
/// config is fine.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct VerificationConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub tolerance: f64,
    pub corpus_size: usize,
    pub dims: Vec<usize>,
    pub atom_counts: Vec<usize>,
    pub norm_kinds: Vec<NormKind>,
    pub suites: Vec<Suite>,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        VerificationConfig {
            schema_version: SCHEMA_VERSION,
            seed: 42,
            tolerance: 1e-9,
            corpus_size: 100,
            dims: vec![2, 3, 4, 5, 6],
            atom_counts: vec![1, 2, 3, 4, 5, 6],
            norm_kinds: vec![NormKind::L1, NormKind::Linf],
            suites: Suite::all(),
        }
    }
}

impl VerificationConfig {
    /// Bounds from the harness contract: dims at most 8, atom counts at
    /// most 16, positive tolerance, nonempty lists.
    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err("tolerance must be a positive real".into());
        }
        if self.corpus_size == 0 {
            return Err("corpus_size must be >= 1".into());
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d == 0 || d > 8) {
            return Err("dims must be nonempty with entries in 1..=8".into());
        }
        if self.atom_counts.is_empty() || self.atom_counts.iter().any(|&a| a == 0 || a > 16) {
            return Err("atom_counts must be nonempty with entries in 1..=16".into());
        }
        if self.norm_kinds.is_empty() {
            return Err("norm_kinds must be nonempty".into());
        }
        if self.suites.is_empty() {
            return Err("suites must be nonempty".into());
        }
        Ok(())
    }
}
