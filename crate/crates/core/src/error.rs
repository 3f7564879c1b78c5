use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic moduli differ: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exponent vector is not primitive modulo {modulus}; reduce to exact order first")]
    NotPrimitive { modulus: u64 },

    #[error("residue is zero modulo {modulus}")]
    ZeroResidue { modulus: u64 },

    #[error("modulus must be at least {min}, got {got}")]
    ModulusTooSmall { min: u64, got: u64 },

    #[error("{modulus} does not divide {target}")]
    NotADivisor { modulus: u64, target: u64 },

    #[error("direction matrix is zero")]
    ZeroMatrix,

    #[error("variety system needs at least one polynomial")]
    EmptySystem,

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("point does not lie on the variety")]
    NotOnVariety,

    #[error("value out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
