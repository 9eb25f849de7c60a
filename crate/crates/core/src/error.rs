use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice context: {0}")]
    InvalidContext(String),

    #[error("lattice context mismatch")]
    ContextMismatch,

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("invalid atom space: {0}")]
    InvalidSpace(String),

    #[error("atom space mismatch")]
    SpaceMismatch,

    #[error("atom index {index} out of range for {atoms} atoms")]
    AtomOutOfRange { index: usize, atoms: usize },

    #[error("operator family is empty")]
    EmptyFamily,

    #[error("power iteration did not converge within {0} iterations")]
    PowerIterationDiverged(usize),

    #[error("sets are not nested")]
    NotNested,

    #[error("sign enumeration infeasible for {0} atoms (cap is 16)")]
    TooManyAtoms(usize),

    #[error("infeasible support assignment: {atoms} atoms on dimension {dim}")]
    InfeasibleSupports { atoms: usize, dim: usize },

    #[error("measure must be positive")]
    MeasureNotPositive,

    #[error("chain is not pointwise nondecreasing (index {0})")]
    NonMonotoneChain(usize),

    #[error("not a positive representation: {0}")]
    InvalidRepresentation(String),

    #[error("tail model supplied where a compact model is required")]
    TailModel,

    #[error("invalid discrete model: {0}")]
    InvalidModel(String),
}
