use std::fmt;

use thiserror::Error;

/// Rule violated by a break profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityRule {
    /// Upper breaks must be strictly increasing.
    Ordering,
    /// Upper breaks must lie in `[1, p*e1]`.
    Range,
    /// Every break except a final `p*e1` must be prime to `p`.
    Coprimality,
    /// Step dimensions must lie in `[1, f]`.
    Dimension,
    /// A break at `p*e1` must have dimension 1.
    TopDimension,
}

impl fmt::Display for AdmissibilityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AdmissibilityRule::Ordering => "ordering",
            AdmissibilityRule::Range => "range",
            AdmissibilityRule::Coprimality => "p-coprimality",
            AdmissibilityRule::Dimension => "dimension",
            AdmissibilityRule::TopDimension => "top-dimension",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("invalid field shape: {0}")]
    InvalidShape(String),

    #[error("inadmissible profile ({rule}): {detail}")]
    Admissibility {
        rule: AdmissibilityRule,
        detail: String,
    },

    #[error("trivial extension: {0}")]
    TrivialExtension(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("modulus is not irreducible over F_{p}: {coeffs:?}")]
    Reducible { p: u64, coeffs: Vec<u64> },

    #[error("class kind mismatch: expected {expected}, got {actual}")]
    WrongKind {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn inadmissible(rule: AdmissibilityRule, detail: impl Into<String>) -> Self {
        Error::Admissibility {
            rule,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
