//! JSON wire formats for spectral-measure specs. All file I/O is UTF-8
//! JSON, versioned by `schema_version`.

use serde::{Deserialize, Serialize};

use latspec::{AtomSpace, LatticeContext, PositiveSpectralMeasure, RegularOperator};

use crate::config::SCHEMA_VERSION;

/// `{"schema_version": 1, "context": {...}, "atoms": [{"label", "matrix"}]}`
/// with matrices as row-major arrays of arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    pub context: LatticeContext,
    pub atoms: Vec<AtomProjectionSpec>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomProjectionSpec {
    pub label: String,
    pub matrix: Vec<Vec<f64>>,
}

impl MeasureSpec {
    pub fn to_measure(&self) -> Result<PositiveSpectralMeasure, String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let space = AtomSpace::new(self.atoms.iter().map(|a| a.label.clone()).collect())
            .map_err(|e| e.to_string())?;
        let projections = self
            .atoms
            .iter()
            .map(|a| RegularOperator::from_rows(a.matrix.clone(), &self.context))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        PositiveSpectralMeasure::new(space, self.context.clone(), projections)
            .map_err(|e| e.to_string())
    }

    pub fn from_measure(measure: &PositiveSpectralMeasure) -> Self {
        MeasureSpec {
            schema_version: SCHEMA_VERSION,
            context: measure.context().clone(),
            atoms: measure
                .space()
                .labels()
                .iter()
                .zip(measure.atom_projections())
                .map(|(label, p)| AtomProjectionSpec {
                    label: label.clone(),
                    matrix: p.rows(),
                })
                .collect(),
        }
    }
}
