//! Finite measurable spaces as atom partitions.
//!
//! The σ-algebra is the power set of the atom list; at this scale every
//! bounded measurable function is simple, which the model makes exact.
//! Measures are stored atomwise (densities with respect to counting
//! measure); set values are computed on demand.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An ordered list of distinct atom labels. The measurable sets are all
/// unions of atoms; the whole space is the union of all of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceSpec", into = "SpaceSpec")]
pub struct AtomSpace {
    atoms: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SpaceSpec {
    atoms: Vec<String>,
}

impl TryFrom<SpaceSpec> for AtomSpace {
    type Error = Error;
    fn try_from(spec: SpaceSpec) -> Result<Self> {
        AtomSpace::new(spec.atoms)
    }
}

impl From<AtomSpace> for SpaceSpec {
    fn from(s: AtomSpace) -> Self {
        SpaceSpec { atoms: s.atoms }
    }
}

impl AtomSpace {
    pub fn new(atoms: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.clone()) {
                return Err(Error::InvalidSpace(format!("duplicate atom label {a:?}")));
            }
        }
        Ok(AtomSpace { atoms })
    }

    pub fn from_labels(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|s| s.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.atoms
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    /// The set of all atoms.
    pub fn full_set(&self) -> MeasurableSet {
        MeasurableSet {
            members: (0..self.len()).collect(),
            space: self.clone(),
        }
    }

    pub fn empty_set(&self) -> MeasurableSet {
        MeasurableSet {
            members: BTreeSet::new(),
            space: self.clone(),
        }
    }

    pub fn singleton(&self, index: usize) -> Result<MeasurableSet> {
        self.set_of(&[index])
    }

    pub fn set_of(&self, indices: &[usize]) -> Result<MeasurableSet> {
        let mut members = BTreeSet::new();
        for &i in indices {
            if i >= self.len() {
                return Err(Error::AtomOutOfRange {
                    index: i,
                    atoms: self.len(),
                });
            }
            members.insert(i);
        }
        Ok(MeasurableSet {
            members,
            space: self.clone(),
        })
    }

    /// All measurable sets, by subset-mask order. Exhaustive enumeration is
    /// intended for small spaces.
    pub fn all_subsets(&self) -> Vec<MeasurableSet> {
        let n = self.len();
        assert!(n <= 20, "subset enumeration capped at 20 atoms");
        (0u32..(1u32 << n))
            .map(|mask| MeasurableSet {
                members: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
                space: self.clone(),
            })
            .collect()
    }
}

/// A measurable set: a subset of atom indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurableSet {
    members: BTreeSet<usize>,
    space: AtomSpace,
}

impl MeasurableSet {
    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(&index)
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<MeasurableSet> {
        self.check_same_space(other)?;
        Ok(MeasurableSet {
            members: self.members.union(&other.members).copied().collect(),
            space: self.space.clone(),
        })
    }

    pub fn intersect(&self, other: &Self) -> Result<MeasurableSet> {
        self.check_same_space(other)?;
        Ok(MeasurableSet {
            members: self.members.intersection(&other.members).copied().collect(),
            space: self.space.clone(),
        })
    }

    pub fn complement(&self) -> MeasurableSet {
        MeasurableSet {
            members: (0..self.space.len())
                .filter(|i| !self.members.contains(i))
                .collect(),
            space: self.space.clone(),
        }
    }

    pub fn difference(&self, other: &Self) -> Result<MeasurableSet> {
        self.intersect(&other.complement())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.space == other.space && self.members.is_subset(&other.members)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.members.is_disjoint(&other.members)
    }

    /// The characteristic function of this set.
    pub fn char_fn(&self) -> BorelFunction {
        let values = (0..self.space.len())
            .map(|i| if self.members.contains(&i) { 1.0 } else { 0.0 })
            .collect();
        BorelFunction {
            values,
            space: self.space.clone(),
        }
    }
}

/// A bounded measurable function: a real value per atom.
#[derive(Clone, Debug, PartialEq)]
pub struct BorelFunction {
    values: Vec<f64>,
    space: AtomSpace,
}

impl BorelFunction {
    pub fn new(values: Vec<f64>, space: &AtomSpace) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidSpace(format!(
                "function has {} values for {} atoms",
                values.len(),
                space.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpace("function values must be finite".into()));
        }
        Ok(BorelFunction {
            values,
            space: space.clone(),
        })
    }

    pub fn constant(space: &AtomSpace, c: f64) -> Self {
        BorelFunction {
            values: vec![c; space.len()],
            space: space.clone(),
        }
    }

    /// The constant function 1 on the whole space.
    pub fn one(space: &AtomSpace) -> Self {
        Self::constant(space, 1.0)
    }

    pub fn zero(space: &AtomSpace) -> Self {
        Self::constant(space, 0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn value(&self, atom: usize) -> f64 {
        self.values[atom]
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// The supremum norm `max |value|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mul(&self, other: &Self) -> Result<BorelFunction> {
        self.check_same_space(other)?;
        Ok(BorelFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
            space: self.space.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<BorelFunction> {
        self.check_same_space(other)?;
        Ok(BorelFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            space: self.space.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<BorelFunction> {
        self.check_same_space(other)?;
        Ok(BorelFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
            space: self.space.clone(),
        })
    }

    pub fn scale(&self, t: f64) -> BorelFunction {
        BorelFunction {
            values: self.values.iter().map(|v| t * v).collect(),
            space: self.space.clone(),
        }
    }

    pub fn abs(&self) -> BorelFunction {
        BorelFunction {
            values: self.values.iter().map(|v| v.abs()).collect(),
            space: self.space.clone(),
        }
    }

    /// `phi = phi+ - phi-` with `phi+ . phi- = 0` pointwise.
    pub fn pos_neg_parts(&self) -> (BorelFunction, BorelFunction) {
        let pos = BorelFunction {
            values: self.values.iter().map(|v| v.max(0.0)).collect(),
            space: self.space.clone(),
        };
        let neg = BorelFunction {
            values: self.values.iter().map(|v| (-v).max(0.0)).collect(),
            space: self.space.clone(),
        };
        (pos, neg)
    }

    pub fn pointwise_max(&self, other: &Self) -> Result<BorelFunction> {
        self.check_same_space(other)?;
        Ok(BorelFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.max(*b))
                .collect(),
            space: self.space.clone(),
        })
    }

    /// Pointwise `self <= other` up to `tol`.
    pub fn leq(&self, other: &Self, tol: f64) -> bool {
        self.space == other.space
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| *a <= *b + tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.space == other.space
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// A finite signed measure, stored atomwise.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedMeasure {
    values: Vec<f64>,
    space: AtomSpace,
}

impl SignedMeasure {
    pub fn new(values: Vec<f64>, space: &AtomSpace) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidSpace(format!(
                "measure has {} values for {} atoms",
                values.len(),
                space.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpace("measure values must be finite".into()));
        }
        Ok(SignedMeasure {
            values,
            space: space.clone(),
        })
    }

    pub fn zero(space: &AtomSpace) -> Self {
        SignedMeasure {
            values: vec![0.0; space.len()],
            space: space.clone(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn atom_value(&self, atom: usize) -> f64 {
        self.values[atom]
    }

    /// The measure of a set: the sum of its atom values.
    pub fn measure_of(&self, set: &MeasurableSet) -> Result<f64> {
        if set.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(set.members().map(|i| self.values[i]).sum())
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.values.iter().all(|v| *v >= -tol)
    }

    /// The total variation norm: `sum_a |mu(a)|`, which for atomic measures
    /// is the sup over measurable partitions of `sum_i |mu(Delta_i)|`.
    pub fn total_variation(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// `integral phi d(mu) = sum_a phi(a) mu(a)`.
    pub fn integrate(&self, phi: &BorelFunction) -> Result<f64> {
        if phi.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(phi.values())
            .map(|(m, p)| m * p)
            .sum())
    }

    /// The reweighted measure `mu^psi(Delta) = integral_Delta psi d(mu)`,
    /// atomwise `psi(a) mu(a)`.
    pub fn reweight(&self, psi: &BorelFunction) -> Result<SignedMeasure> {
        if psi.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(SignedMeasure {
            values: self
                .values
                .iter()
                .zip(psi.values())
                .map(|(m, p)| m * p)
                .collect(),
            space: self.space.clone(),
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.space == other.space
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}
