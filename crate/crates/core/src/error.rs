use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ell must be an odd prime different from p (got p = {p}, ell = {ell})")]
    BadEll { p: u64, ell: u64 },
    #[error("t must be positive")]
    BadT,
    #[error("{p} is not primitive modulo {ell} (order {order})")]
    NotPrimitive { p: u64, ell: u64, order: u64 },
    #[error("graph is disconnected: t is odd and sqrt(q) = ell - 1")]
    Disconnected,
    #[error("{what} = {value} exceeds the configured bound {limit}")]
    BoundExceeded { what: &'static str, value: String, limit: String },
    #[error("parameters too large to represent ({0})")]
    Overflow(String),
    #[error("the zero element has no discrete logarithm")]
    ZeroElement,
    #[error("residue {0} is divisible by q - 1; no digit expansion")]
    ZeroResidue(i128),
    #[error("carry count undefined: {a} + {b} is divisible by q - 1")]
    UndefinedSum { a: i128, b: i128 },
    #[error("conservation violated: {0}")]
    ConservationViolation(String),
    #[error("strongly regular identity {identity} fails at ({row}, {col}): expected {expected}, got {actual}")]
    SrgViolation { identity: &'static str, row: usize, col: usize, expected: i64, actual: i64 },
    #[error("Stickelberger mismatch at (a, b) = ({a}, {b}): valuation {valuation}, carries {carries}")]
    MismatchFound { a: u64, b: u64, valuation: String, carries: u32 },
    #[error("precision N = {n} too small (need more than {needed})")]
    PrecisionInsufficient { n: u32, needed: u32 },
    #[error("block {block}: local Smith form {found} differs from expected {expected}")]
    SnfMismatch { block: String, expected: String, found: String },
    #[error("p = {0} is not congruent to 2 mod 3")]
    BadResidue(u64),
    #[error("symbolic identity failed: {0}")]
    Mismatch(String),
    #[error("formula and brute-force pipelines disagree: {0}")]
    MethodMismatch(String),
}

impl Error {
    /// True for errors that signal a mathematical disagreement (a bug or a
    /// misread formula) rather than bad input or exhausted bounds.
    pub fn is_mismatch(&self) -> bool {
        matches!(
            self,
            Error::ConservationViolation(_)
                | Error::SrgViolation { .. }
                | Error::MismatchFound { .. }
                | Error::SnfMismatch { .. }
                | Error::Mismatch(_)
                | Error::MethodMismatch(_)
        )
    }
}
