//! Positive spectral measures on finite atom spaces and the positive
//! representations they generate, realized on finite-dimensional Banach
//! lattices `R^n` with coordinatewise order.
//!
//! The crate is organized around a small tower of structures:
//!
//! * [`lattice`] — `R^n` with a selectable lattice norm, vectors, duality;
//! * [`operator`] — regular operators (n×n matrices), modulus, operator and
//!   regular norms, order suprema/infima, commutants;
//! * [`space`] — finite measurable spaces as atom partitions, bounded
//!   measurable functions, scalar signed measures, total variation;
//! * [`spectral`] — positive spectral measures: axiom validation, induced
//!   scalar measures, monotonicity and total-variation bounds;
//! * [`representation`] — the representation of bounded measurable functions
//!   generated by a spectral measure, its norm identities, commutant and
//!   subalgebra equalities, and extraction of the measure back;
//! * [`lch`] — a truncated discrete model of a locally compact Hausdorff
//!   space with an optional tail lump, carrying the continuous-function
//!   layer: Riesz correspondence, regularity, retrieval formulas.
//!
//! Everything is plain `f64` with a global comparison tolerance
//! ([`DEFAULT_TOL`], configurable per call). All values are immutable after
//! construction and every operation is a pure function.

pub mod error;
pub mod lattice;
pub mod lch;
mod linalg;
pub mod operator;
pub mod probe;
pub mod report;
pub mod representation;
pub mod space;
pub mod spectral;

pub use error::Error;
pub use lattice::{LatticeContext, LatticeVector, NormKind};
pub use lch::{C0Function, DiscreteLch};
pub use operator::RegularOperator;
pub use probe::ProbeGrid;
pub use report::{CheckResult, ValidationReport};
pub use representation::{GeneratedRepresentation, PositiveRepresentation};
pub use space::{AtomSpace, BorelFunction, MeasurableSet, SignedMeasure};
pub use spectral::{GeneratorStyle, PositiveSpectralMeasure};

/// Default absolute comparison tolerance used throughout.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Result alias over the crate error type.
pub type Result<T> = std::result::Result<T, Error>;
