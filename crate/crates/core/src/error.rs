use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is divisible by {modulus} and has no inverse")]
    NotInvertible { modulus: u64 },

    #[error("generator n must be at least 1")]
    ZeroGenerator,

    #[error("{0} is not of the form 4n^2+1")]
    NotQuadForm(String),

    #[error("modulus {0} must be an odd prime")]
    BadModulus(u64),

    #[error("modulus {modulus} divides the target")]
    ModulusDividesTarget { modulus: u64 },

    #[error("candidate at u = {u} has no square discriminant")]
    NoRoot { u: String },

    #[error("candidate at u = {u} only yields the trivial split 1 x N")]
    TrivialSplit { u: String },

    #[error("{a} x {b} is not a proper factorization of the target")]
    NotAFactorization { a: String, b: String },

    #[error("generic Fermat factorization needs an odd N >= 9, got {0}")]
    BadGenericInput(String),

    #[error("Fermat index {index} is below the required minimum {required}")]
    IndexTooSmall { index: u32, required: u32 },

    #[error("Fermat index {index} exceeds the size budget {max}")]
    IndexTooLarge { index: u32, max: u32 },

    #[error("target n = {0} gives a prime N")]
    PrimeTarget(String),

    #[error("unknown claim identifier {0:?}")]
    UnknownClaim(String),

    #[error("empty or reversed range {lo}..={hi}")]
    BadRange { lo: u64, hi: u64 },

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
}
