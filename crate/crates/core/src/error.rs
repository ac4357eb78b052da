use thiserror::Error;

/// Errors raised across the decomposition pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CadError {
    #[error("variable `{0}` is not part of the variable ordering")]
    UnknownVariable(String),
    #[error("ordering mismatch: {0}")]
    OrderingMismatch(String),
    #[error("undefined input: {0}")]
    UndefinedInput(&'static str),
    #[error("degenerate resultant: an argument is constant in the elimination variable")]
    DegenerateResultant,
    #[error("degenerate discriminant: degree in the main variable is below 2")]
    DegenerateDiscriminant,
    #[error("dimension mismatch: polynomial needs {needed} coordinates, sample has {given}")]
    DimensionMismatch { needed: usize, given: usize },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("well-orientedness failure: {0} vanishes identically over a cell")]
    Nullification(String),
    #[error(
        "primitivity violation: `{poly}` has non-constant content `{content}` in its main variable; \
         reduced projection is only valid for primitive equational constraints \
         (see the imprimitive product equalities of the doubly-exponential construction)"
    )]
    PrimitivityViolation { poly: String, content: String },
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("basis is not flagged as a Groebner basis")]
    NotGroebner,
    #[error("elimination requires a lex Groebner basis")]
    NotLex,
    #[error("invalid elimination set: {0}")]
    InvalidElimination(String),
    #[error("formula error: {0}")]
    Formula(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CadError>;
