use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{value} is not integral at p = {prime}")]
    NonIntegral { value: String, prime: u64 },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("precision {precision} is not supported at p = {prime}")]
    PrecisionUnsupported { prime: u64, precision: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("p = {prime} is not admissible: {reason}")]
    InvalidPrime { prime: u64, reason: String },

    #[error("invalid datum: {0}")]
    InvalidDatum(String),

    #[error("structure violated for {datum} at p = {prime}: {detail}")]
    StructureViolation {
        datum: String,
        prime: u64,
        detail: String,
    },

    #[error("denominator of the modified inner sum vanishes at b = {b} (p = {prime})")]
    PoleAtB { b: u64, prime: u64 },

    #[error("denominator has a root outside the pole catalog: {0}")]
    UnexpectedPole(String),

    #[error("linear system is singular modulo p")]
    SingularSystem,

    #[error("p = {prime} is not ordinary (a_p = {a_p})")]
    NonOrdinary { prime: u64, a_p: i64 },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("|a_p| = |{a_p}| exceeds 2p^(3/2) at p = {prime}")]
    BoundViolation { prime: u64, a_p: i64 },

    #[error("prime {0} listed twice")]
    DuplicatePrime(u64),

    #[error("no coefficient for p = {prime} in form {label}")]
    MissingCoefficient { label: String, prime: u64 },

    #[error("no modular form is attached to {0}")]
    NoFormData(String),

    #[error("network: {0}")]
    Network(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed external input rather than by the arithmetic.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Format { .. }
                | Error::BoundViolation { .. }
                | Error::DuplicatePrime(_)
                | Error::MissingCoefficient { .. }
                | Error::Io(_)
                | Error::Network(_)
                | Error::NoFormData(_)
        )
    }
}
