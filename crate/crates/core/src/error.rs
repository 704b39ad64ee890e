use thiserror::Error;

/// Errors raised by the algebra, calculus, and classification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {0} is a zero divisor in the cover ring")]
    ZeroDivisor(String),
    #[error("cover relation must be nonzero")]
    DegenerateCover,
    #[error("forms live over incompatible coefficient rings")]
    IncompatibleRings,
    #[error("form arity {0} exceeds the supported maximum of 3")]
    ArityTooHigh(usize),
    #[error("interior product of a 0-form")]
    ZeroArity,
    #[error("rational map component for `{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("operation requires a nonzero form")]
    ZeroForm,
    #[error("coefficients are not homogeneous of a common degree")]
    NotHomogeneous,
    #[error("form does not annihilate the radial field: i_R(omega) = {0}")]
    NotRadial(String),
    #[error("coefficients share the common factor {0}")]
    NotSaturated(String),
    #[error("form is not integrable: omega ^ d(omega) = {0}")]
    NotIntegrable(String),
    #[error("jet order {0} at the point is below 2")]
    JetTooLow(usize),
    #[error("expected a degree-four foliation, found degree {0}")]
    DegreeMismatch(i64),
    #[error("dimension n = {0} is below 3")]
    DimensionTooLow(usize),
    #[error("point has {got} coordinates, chart needs {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("chart index {0} out of range")]
    BadChart(usize),
    #[error("vector field is tangent to the form (i_X(omega) = 0)")]
    NotTransverse,
    #[error("structural system violated: {0}")]
    StructuralSystemViolated(String),
    #[error("case mismatch: handler for {expected} received {got}")]
    CaseMismatch { expected: String, got: String },
    #[error("case 1 inconsistency: {0}")]
    InconsistentCase1(String),
    #[error("derived relation failed: {0}")]
    DerivedRelationFailed(String),
    #[error("non-rational data needed: {0}")]
    NonRationalDataNeeded(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
