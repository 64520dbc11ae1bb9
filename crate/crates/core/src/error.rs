//! Crate-wide error type.
//!
//! Every fallible operation in this crate reports one of these variants.
//! The CLI maps a variant to its stable [`Error::name`] so scripts can match
//! on error kinds without parsing prose.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero element")]
    DivisionByZero,

    /// Standard parts and finite decompositions exist only for finite
    /// elements (those lying between two real bounds).
    #[error("element is infinite: {0}")]
    NotFinite(String),

    #[error("denominator vanishes at the evaluation point {0}")]
    PoleAtPoint(String),

    /// A series operation left no provably-correct coefficient.
    #[error("no provably-correct coefficient remains in the result window")]
    EmptyWindow,

    #[error("domain error: {0}")]
    DomainError(String),

    /// An irrational value was requested under exact (rational) coefficients.
    #[error("mode error: {0}")]
    ModeError(String),

    #[error("requested order {requested} exceeds the series window {window}")]
    WindowTooSmall { requested: i64, window: i64 },

    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    SyntaxError {
        offset: usize,
        expected: String,
        found: String,
    },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("exponent {0} is not an integer, which this backend requires")]
    NonIntegerExponent(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("function `{func}` is not available on the {backend} backend")]
    FunctionUnavailable { func: String, backend: &'static str },

    #[error("`{0}` has no derivative rule")]
    NonDifferentiableNode(String),

    #[error("difference quotient is infinite at this point")]
    NotDifferentiableHere,

    #[error("sequence term undefined: denominator vanishes at n = {0}")]
    UndefinedTerm(u64),

    #[error("not representable: {0}")]
    NotRepresentable(String),

    #[error("tooth index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("scene contains no polylines or points")]
    EmptyScene,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NotFinite(_) => "NotFinite",
            Error::PoleAtPoint(_) => "PoleAtPoint",
            Error::EmptyWindow => "EmptyWindow",
            Error::DomainError(_) => "DomainError",
            Error::ModeError(_) => "ModeError",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::UnknownFunction(_) => "UnknownFunction",
            Error::NonIntegerExponent(_) => "NonIntegerExponent",
            Error::UnboundVariable(_) => "UnboundVariable",
            Error::FunctionUnavailable { .. } => "FunctionUnavailable",
            Error::NonDifferentiableNode(_) => "NonDifferentiableNode",
            Error::NotDifferentiableHere => "NotDifferentiableHere",
            Error::UndefinedTerm(_) => "UndefinedTerm",
            Error::NotRepresentable(_) => "NotRepresentable",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::EmptyScene => "EmptyScene",
            Error::Config(_) => "Config",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
