use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("{values} values need {} breakpoints, got {breaks}", values - 1)]
    LengthMismatch { breaks: usize, values: usize },
    #[error("breakpoint {index} = {value} is outside (0, 1)")]
    BreakpointOutOfRange { index: usize, value: f64 },
    #[error("breakpoint {index} does not exceed its predecessor")]
    BreakpointsNotIncreasing { index: usize },
    #[error("value {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("value {index} = {value} is negative")]
    NegativeValue { index: usize, value: f64 },
    #[error("no pieces given")]
    Empty,
    #[error("last breakpoint must be 1, got {value}")]
    LastBreakpointNotOne { value: f64 },
    #[error("invalid interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
    #[error("level {value} is negative")]
    NegativeLevel { value: f64 },
    #[error("dilation factor {value} must be positive and finite")]
    BadDilation { value: f64 },
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("exponent {0} must lie in (0, 1]")]
    BadExponent(f64),
    #[error("Phi fails {property} near t = {witness}")]
    BadPhi { property: &'static str, witness: f64 },
    #[error("profile is not quasiconcave (violation near t = {witness})")]
    NotQuasiconcave { witness: f64 },
    #[error("tabulated profile: {0}")]
    Table(String),
    #[error("normalisation constant is not finite and positive")]
    Normalisation,
    #[error("value {0} outside the range of the profile")]
    OutOfRange(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("iteration count must be at least 1")]
    ZeroIterations,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("no associate norm is known for {0}")]
    UnsupportedAssociate(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimalError {
    #[error("no r.i. domain exists: the norm of H_I 1 in Y is infinite")]
    NoDomain,
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("no generator kinds given")]
    EmptyKinds,
    #[error("corpus size must be at least 1")]
    EmptyCorpus,
    #[error("unknown generator kind '{0}'")]
    UnknownKind(String),
    #[error("unknown suite '{name}'; registered suites: {}", registered.join(", "))]
    UnknownSuite { name: String, registered: Vec<String> },
}
