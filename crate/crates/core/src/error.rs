use std::fmt;

use thiserror::Error;

/// One violated presentation axiom, with a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub(crate) fn push(&mut self, code: &'static str, witness: impl Into<String>) {
        self.violations.push(Violation {
            code,
            witness: witness.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.code, v.witness)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("DIVISION_BY_ZERO")]
    DivisionByZero,
    #[error("FIELD_MISMATCH: operands belong to different fields")]
    FieldMismatch,
    #[error("SINGULAR: matrix is not invertible")]
    Singular,
    #[error("NO_SOLUTION: linear system is inconsistent")]
    NoSolution,
    #[error("NOT_IN_KH: element does not lie in the span of H")]
    NotInKh,
    #[error("TOO_LARGE: {what} has size {size}, bound is {bound}")]
    TooLarge { what: &'static str, size: u64, bound: u64 },
    #[error("GENERATION_CHECK_FAILED: generators reach {generated} of {expected} elements of 1+J")]
    GenerationCheckFailed { generated: u64, expected: u64 },
    #[error("LOCALIZATION_FAILED: {0}")]
    LocalizationFailed(String),
    #[error("NOT_IN_STABILIZER")]
    NotInStabilizer,
    #[error("BAD_REPRESENTATIVE: {0}")]
    BadRepresentative(String),
    #[error("NON_INTEGRAL: {0}")]
    NonIntegral(String),
    #[error("invalid presentation: {0}")]
    Invalid(ValidationReport),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("UNKNOWN_FIXTURE: {0}")]
    UnknownFixture(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("MISMATCH: {0}")]
    Mismatch(String),
}

impl Error {
    /// Parse error without a position (single-line inputs).
    pub fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column: 1,
            message: message.into(),
        }
    }

    /// Stable machine-readable kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::FieldMismatch => "FIELD_MISMATCH",
            Error::Singular => "SINGULAR",
            Error::NoSolution => "NO_SOLUTION",
            Error::NotInKh => "NOT_IN_KH",
            Error::TooLarge { .. } => "TOO_LARGE",
            Error::GenerationCheckFailed { .. } => "GENERATION_CHECK_FAILED",
            Error::LocalizationFailed(_) => "LOCALIZATION_FAILED",
            Error::NotInStabilizer => "NOT_IN_STABILIZER",
            Error::BadRepresentative(_) => "BAD_REPRESENTATIVE",
            Error::NonIntegral(_) => "NON_INTEGRAL",
            Error::Invalid(_) => "INVALID_PRESENTATION",
            Error::InvalidField(_) => "INVALID_FIELD",
            Error::UnknownFixture(_) => "UNKNOWN_FIXTURE",
            Error::Parse { .. } => "PARSE",
            Error::Io(_) => "IO",
            Error::Inconsistent(_) => "INCONSISTENT",
            Error::Mismatch(_) => "MISMATCH",
        }
    }

    /// Errors in the input rather than in the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_)
                | Error::InvalidField(_)
                | Error::UnknownFixture(_)
                | Error::Parse { .. }
                | Error::Io(_)
                | Error::TooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
