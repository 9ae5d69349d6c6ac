use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be odd and at least 3, got {0}")]
    InvalidModulus(String),
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error("{value} exceeds the oracle bound {bound}")]
    AboveOracleBound { value: String, bound: u64 },
    #[error("{0} is below the supported range")]
    BelowRange(String),
    #[error("miller-rabin base {base} outside [2, N-2] for N = {modulus}")]
    InvalidBase { base: String, modulus: String },
    #[error("curve parameter m must be nonzero modulo N")]
    DegenerateCurve,
    #[error("p = {0} is not congruent to 3 mod 4")]
    NotThreeModFour(u64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
