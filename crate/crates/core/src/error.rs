use thiserror::Error;

/// Failure while turning expression text into a tree.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown identifier `{name}` at column {column}")]
    UnknownIdentifier { column: usize, name: String },
}

impl ParseError {
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. } | ParseError::UnknownIdentifier { column, .. } => {
                *column
            }
        }
    }
}

/// Failure while evaluating a tree at a point. `node` is the rendered
/// subexpression that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{reason} in `{node}` at x = {x}")]
    Domain {
        node: String,
        reason: &'static str,
        x: f64,
    },
    #[error("non-finite value in `{node}` at x = {x}")]
    NonFinite { node: String, x: f64 },
    #[error("point {x} lies outside the function domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },
    #[error("codomain violation: f({x}) = {value} is not {required}")]
    Codomain {
        x: f64,
        value: f64,
        required: &'static str,
    },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid interval [{lo}, {hi}]: need finite endpoints with lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{class} requires f {required}; f({x}) = {value}")]
    CodomainRequirement {
        class: String,
        required: &'static str,
        x: f64,
        value: f64,
    },
    #[error("evaluation failed at {failures} of {total} search grid points; aborting")]
    PervasiveFailure { failures: usize, total: usize },
    #[error("weights must sum to 1 (got {sum})")]
    WeightSum { sum: f64 },
    #[error("partial combination at index {index} left the domain of f: {value}")]
    DomainEscape { index: usize, value: f64 },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error("spec error: {0}")]
    Spec(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
