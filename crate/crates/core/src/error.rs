use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value could not be certified at the current working precision.
    /// Callers are expected to retry with more digits.
    #[error("precision exhausted: value indistinguishable from zero at the working precision")]
    PrecisionExhausted,

    #[error("division by exact zero")]
    DivisionByZero,

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("operands live in different coefficient rings")]
    RingMismatch,

    #[error("constant term must vanish")]
    NonZeroConstantTerm,

    #[error("constant term must be exactly 1")]
    ConstantTermNotOne,

    #[error("the polynomial is zero")]
    ZeroPolynomial,

    #[error("tower level {have} is too small, level {need} is required")]
    LevelTooSmall { need: u32, have: u32 },

    #[error("Newton condition v(f(x0)) > 2 v(f'(x0)) is violated")]
    NewtonCondition,

    #[error("Newton iteration did not converge within {0} steps")]
    NoConvergence(usize),

    #[error("precision escalation gave up after {doublings} doublings (last precision {precision})")]
    EscalationLimit { doublings: u32, precision: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
