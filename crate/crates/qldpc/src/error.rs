use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported extension degree l = {0}; supported range is 1..=4")]
    UnsupportedExtensionDegree(usize),

    #[error("polynomial {poly:#x} is not a primitive polynomial of degree {degree}")]
    NonPrimitivePolynomial { poly: u64, degree: u32 },

    #[error("element value {value} out of range for a field of size {size}")]
    ElementOutOfRange { value: usize, size: usize },

    #[error("element exponent {exponent} out of range 0..={max}")]
    ExponentOutOfRange { exponent: usize, max: usize },

    #[error("division by zero in field arithmetic")]
    DivisionByZero,

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("column index {column} out of range 1..={max}")]
    ColumnOutOfRange { column: usize, max: usize },

    #[error("duplicate column {column} in row {row}")]
    DuplicateColumn { row: usize, column: usize },

    #[error("rows {row_a} and {row_b} violate the required orthogonality")]
    OrthogonalityViolation { row_a: usize, row_b: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration of {size} cases exceeds the supported limit {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("check matrix is not in stacked extension form: {0}")]
    NotStackedForm(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
