use thiserror::Error;

/// Errors raised by the library. Failed numerical checks are not errors;
/// they are reported through [`crate::Verdict`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid modulus {0}: must satisfy 1 <= c <= 2^31")]
    InvalidModulus(u64),

    #[error("{x} is not invertible modulo {modulus} (gcd = {gcd})")]
    NotInvertible { x: i64, modulus: u64, gcd: u64 },

    #[error("{d} does not divide {c}")]
    NotDivisor { d: u64, c: u64 },

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("[{x}:{y}] is not a point of P^1(Z/{modulus}Z)")]
    NotProjectivePoint { x: u64, y: u64, modulus: u64 },

    #[error("matrix does not have determinant 1 modulo {0}")]
    NotSpecialLinear(u64),

    #[error("operands live modulo {0} and {1}")]
    ModulusMismatch(u64, u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("{what} needs {needed}, budget is {limit}")]
    Budget { what: String, needed: u128, limit: u128 },

    #[error("{method} did not converge: {detail}")]
    Convergence { method: String, detail: String },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn budget(what: &str, needed: u128, limit: u128) -> Result<()> {
    if needed > limit {
        return Err(Error::Budget { what: what.to_string(), needed, limit });
    }
    Ok(())
}
