//! Crate-wide error type.
//!
//! Everything except [`Error::NotConverged`] is a configuration or input
//! error; the CLI maps those to exit code 2. Inequality violations are not
//! errors at all — they are reported through verdicts.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two matrices that must share a dimension do not.
    DimensionMismatch { left: usize, right: usize },
    /// Dimension outside 1..=MAX_DIM.
    BadDimension { n: usize },
    /// A matrix entry is negative (or NaN).
    NegativeEntry { row: usize, col: usize, value: f64 },
    /// A matrix entry is infinite.
    NonFiniteEntry { row: usize, col: usize, value: f64 },
    /// Flat data length does not match n*n.
    DataShape { expected: usize, got: usize },
    /// An operation over a list of matrices received an empty list.
    EmptyList,
    /// Cyclic index outside 1..=m.
    IndexOutOfRange { index: usize, len: usize },
    /// Matrix count and weight count differ.
    WeightCount { mats: usize, weights: usize },
    /// A weight is zero, negative or NaN.
    NonPositiveWeight { index: usize, value: f64 },
    /// Weight sum violates the declared constraint.
    WeightSum { sum: f64, required: &'static str },
    /// A checker received weights with the wrong constraint tag.
    WeightConstraintMismatch { suite: String, required: &'static str },
    /// An even/odd construction received a list of the wrong parity.
    ParityMismatch { len: usize, required: &'static str },
    /// Hadamard exponent below the minimum the inequality allows.
    ExponentRange { alpha: f64, min: f64 },
    /// Hadamard exponent must be nonnegative.
    NegativeExponent { alpha: f64 },
    /// Spectral iteration hit its cap without certifying the value.
    NotConverged { what: &'static str },
    /// Oracle only supports n <= 5.
    OracleDimension { n: usize },
    /// Suite tag not present in the registry.
    UnknownSuite { name: String },
    /// Kernel family name not recognised.
    UnknownKernel { name: String },
    /// Kernel evaluated negative or non-finite at a quadrature node.
    KernelValue { name: String, x: f64, y: f64, value: f64 },
    /// Suite requires a different number of input operators.
    Arity { suite: String, expected: String, got: usize },
    /// Malformed input file or flag value.
    Parse { message: String },
    /// Filesystem failure.
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left}x{left} vs {right}x{right}")
            }
            Error::BadDimension { n } => {
                write!(f, "dimension {n} outside supported range 1..=256")
            }
            Error::NegativeEntry { row, col, value } => {
                write!(f, "entry ({row},{col}) = {value} is negative")
            }
            Error::NonFiniteEntry { row, col, value } => {
                write!(f, "entry ({row},{col}) = {value} is not finite")
            }
            Error::DataShape { expected, got } => {
                write!(f, "data length mismatch: expected {expected}, got {got}")
            }
            Error::EmptyList => write!(f, "operator list is empty"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "cyclic index {index} out of range 1..={len}")
            }
            Error::WeightCount { mats, weights } => {
                write!(f, "{mats} operators but {weights} weights")
            }
            Error::NonPositiveWeight { index, value } => {
                write!(f, "weight {index} = {value} is not strictly positive")
            }
            Error::WeightSum { sum, required } => {
                write!(f, "weight sum {sum} violates constraint {required}")
            }
            Error::WeightConstraintMismatch { suite, required } => {
                write!(f, "suite {suite} requires {required} weights")
            }
            Error::ParityMismatch { len, required } => {
                write!(f, "operator count {len} has wrong parity, {required} required")
            }
            Error::ExponentRange { alpha, min } => {
                write!(f, "exponent {alpha} below minimum {min}")
            }
            Error::NegativeExponent { alpha } => {
                write!(f, "exponent {alpha} is negative")
            }
            Error::NotConverged { what } => {
                write!(f, "{what} did not converge within the iteration budget")
            }
            Error::OracleDimension { n } => {
                write!(f, "characteristic-polynomial oracle limited to n <= 5, got {n}")
            }
            Error::UnknownSuite { name } => write!(f, "unknown suite '{name}'"),
            Error::UnknownKernel { name } => write!(f, "unknown kernel '{name}'"),
            Error::KernelValue { name, x, y, value } => {
                write!(f, "kernel {name} evaluates to {value} at ({x},{y})")
            }
            Error::Arity { suite, expected, got } => {
                write!(f, "suite {suite} expects {expected} operators, got {got}")
            }
            Error::Parse { message } => write!(f, "parse error: {message}"),
            Error::Io { path, message } => write!(f, "io error on {path}: {message}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    /// True for everything a CLI run should report as a configuration
    /// problem (exit 2) rather than an inequality failure (exit 1).
    pub fn is_config(&self) -> bool {
        !matches!(self, Error::NotConverged { .. })
    }
}
