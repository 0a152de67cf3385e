use num_bigint::BigInt;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The polynomial `Y^3 + b Y^2 + a Y - 1` has three real roots.
    #[error("discriminant {disc} is non-negative, the base polynomial has no complex root")]
    NotComplex { disc: BigInt },
    /// No root beta > 1 with reciprocal in (0,1).
    #[error("({a},{b}) does not define a cubic complex Pisot unit: {reason}")]
    NotPisotUnit { a: i64, b: i64, reason: String },
    /// Input outside [0,1) for a greedy expansion.
    #[error("expansion input must lie in [0,1)")]
    OutOfRange,
    /// Galois image outside the acceptance window.
    #[error("Galois image lies outside the window [0, m/(1-gamma'))")]
    WindowViolation,
    /// The digit budget was exhausted before the remainder vanished.
    #[error("expansion did not terminate within {max_digits} digits")]
    DigitBudgetExceeded { max_digits: usize },
    /// Division by the zero element of Q(beta).
    #[error("division by zero in Q(beta)")]
    DivisionByZero,
    /// The two points span a line through the origin; no circumcenter exists.
    #[error("points are collinear with the origin")]
    Collinear,
    /// The for-all patch and the pointwise patch disagree on an interval.
    #[error("patch is not constant on the interval; Xi was computed with a different L")]
    InconsistentPartition,
    /// The kept vertices do not surround the origin.
    #[error("half-planes do not bound a cell around the origin")]
    UnboundedCell,
    /// `m < beta - 1`: the set X^m is not a cut-and-project set.
    #[error("alphabet too small: m={m} < beta-1, X^m is not a cut-and-project set")]
    AlphabetTooSmall { m: i64 },
    /// Closed forms are only available for the Tribonacci base (a,b)=(1,1).
    #[error("closed form requires the Tribonacci base (a,b)=(1,1), got ({a},{b})")]
    WrongBase { a: i64, b: i64 },
    /// The index range does not straddle zero.
    #[error("index range [{i},{k}] does not contain w=0")]
    InvalidRange { i: usize, k: usize },
    /// Breadth-first search frontier exceeded the node budget.
    #[error("point generation exceeded the node budget of {budget}")]
    BudgetExceeded { budget: usize },
    /// A window expression failed to parse.
    #[error("parse error at position {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
    /// Exponent of beta outside the accepted range.
    #[error("exponent {exp} out of range for beta power")]
    ExponentOutOfRange { exp: i64 },
    /// A stated operation precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// I/O or serialization failure in the CLI layer.
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable error code, used by the CLI JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotComplex { .. } => "NotComplex",
            Error::NotPisotUnit { .. } => "NotPisotUnit",
            Error::OutOfRange => "OutOfRange",
            Error::WindowViolation => "WindowViolation",
            Error::DigitBudgetExceeded { .. } => "DigitBudgetExceeded",
            Error::DivisionByZero => "DivisionByZero",
            Error::Collinear => "Collinear",
            Error::InconsistentPartition => "InconsistentPartition",
            Error::UnboundedCell => "UnboundedCell",
            Error::AlphabetTooSmall { .. } => "AlphabetTooSmall",
            Error::WrongBase { .. } => "WrongBase",
            Error::InvalidRange { .. } => "InvalidRange",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::ParseError { .. } => "ParseError",
            Error::ExponentOutOfRange { .. } => "ExponentOutOfRange",
            Error::Precondition(_) => "Precondition",
            Error::Io(_) => "Io",
        }
    }
}
