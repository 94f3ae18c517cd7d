use thiserror::Error;

/// Errors surfaced by the toolkit.
///
/// Most variants are validation failures on inputs; `AccumulationMismatch`,
/// `NegativeWeight` and `SingularMatrix` are different: they can only fire if
/// one of the certified algebraic identities fails numerically, so they must
/// never occur and a test treats them as findings.
#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration budget exceeded: {needed} points requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sample table incomplete: expected {expected} samples, got {got}")]
    IncompleteSamples { expected: u64, got: u64 },

    #[error("pair collision: the two group elements of a projection pair must differ")]
    PairCollision,

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("group order {0} is not an odd prime")]
    NotPrime(u32),

    #[error("accumulated factor at index {index:?} deviates from the rotating-pair constant by {relative:.3e} (tolerance {tolerance:.1e})")]
    AccumulationMismatch {
        index: Vec<u8>,
        relative: f64,
        tolerance: f64,
    },

    #[error("linear solve ill-conditioned: relative residual {residual:.3e} exceeds {tolerance:.1e}")]
    IllConditioned { residual: f64, tolerance: f64 },

    #[error("polynomial degree {degree} exceeds the requested bound {bound}")]
    DegreeExceeded { degree: u32, bound: u32 },

    #[error("|z| = {modulus:.6} exceeds the certified radius {radius:.6}")]
    RadiusExceeded { modulus: f64, radius: f64 },

    #[error("hull weight {weight:.3e} at position {position} is negative beyond tolerance")]
    NegativeWeight { position: usize, weight: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("polynomial is not {degree}-homogeneous")]
    NotHomogeneous { degree: u32 },

    #[error("certified sup norm {sup:.6} exceeds the unit bound")]
    NotBounded { sup: f64 },

    #[error("no torus constant supplied and no configured default")]
    MissingTorusConstant,

    #[error("power iteration did not converge; best lower bound {best:.6e}")]
    NonConvergence { best: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
