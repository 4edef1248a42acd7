use thiserror::Error;

use crate::form::DifferentialForm;

/// Position-carrying failure raised by the expression and form parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("coordinate index {index} at position {position} is outside 1..={dim}")]
    IndexOutOfRange {
        position: usize,
        index: u64,
        dim: usize,
    },
    #[error("unknown function `{name}` at position {position}")]
    UnknownFunction { position: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::IndexOutOfRange { position, .. }
            | ParseError::UnknownFunction { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("division by an expression that is identically zero")]
    DivisionByZero,
    #[error("{0} is undefined at this argument")]
    Domain(&'static str),
    #[error("the derivative order of the zero expression is undefined")]
    UndefinedOrder,
    #[error("expected a form of degree {expected}, found degree {found}")]
    InvalidDegree {
        expected: &'static str,
        found: usize,
    },
    #[error("fundamental field index must be at least 1, got {0}")]
    InvalidFieldIndex(usize),
    #[error("coordinate index {index} exceeds the declared dimension {dim}")]
    IndexOutOfRange { index: u32, dim: usize },
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input has derivative order {found}, at most {max} is supported here")]
    OrderTooHigh { max: u32, found: u32 },
    #[error("form is not a source form: it has a component along dq{index}[{order}]")]
    NotHorizontal { index: u32, order: u32 },
    #[error("component {component} is not affine in the second derivatives")]
    NotAffine { component: usize },
    #[error("source form is not variational: Helmholtz-Sonin form is {helmholtz}")]
    NotVariational { helmholtz: DifferentialForm },
    #[error("homotopy integration needs coefficients polynomial in the integrated coordinates")]
    NonPolynomialCoefficient,
    #[error("components {i} and {j} are not the gradient of a potential on the fiber")]
    SymmetryViolation { i: usize, j: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
