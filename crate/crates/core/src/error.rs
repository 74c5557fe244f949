use thiserror::Error;

/// Errors raised while building or analysing a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FssqmError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("grading order must satisfy lambda >= 2, got {0}")]
    InvalidLambda(usize),

    #[error("structure function violates F(n) > 0 at n = {n} (F = {value})")]
    Positivity { n: usize, value: f64 },

    #[error("structure function value at n = {n} is not finite")]
    Overflow { n: usize },

    #[error("C_lambda-extended parameters must satisfy sum(alpha) = 0, got {sum:e}")]
    AlphaSum { sum: f64 },

    #[error("expected {expected} {what}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("Fock dimension {actual} too small, need at least {required}")]
    InsufficientDimension { required: usize, actual: usize },

    #[error("phi(n) = prod f_i(n) must be real and positive for n >= lambda - 1; fails at n = {n} (phi = {re} + {im}i)")]
    PhiViolation { n: usize, re: f64, im: f64 },

    #[error("table of {what} has {len} entries but n = {n} is required")]
    TableTooShort {
        what: &'static str,
        len: usize,
        n: usize,
    },

    #[error("polynomial degree {0} exceeds the supported maximum of 8")]
    PolynomialDegree(usize),

    #[error("block index ({row}, {col}) outside 1..={lambda}")]
    BlockIndex {
        row: usize,
        col: usize,
        lambda: usize,
    },

    #[error("M operators are only available for lambda in 2..=5, got {0}")]
    UnsupportedLambda(usize),

    #[error("negative radicand {value:e} at n = {n}")]
    NegativeRadicand { n: usize, value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sector {mu}: {what} disagrees with the transformed block (residual {residual:e})")]
    BlockMismatch {
        mu: usize,
        what: &'static str,
        residual: f64,
    },

    #[error("spectrum mismatch at level {level}: {detail}")]
    SpectrumMismatch { level: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, FssqmError>;
