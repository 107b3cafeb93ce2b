//! Exact computations with ramification in elementary abelian
//! p-extensions of local fields.
//!
//! - [`breakcalc`]: break sequences, Herbrand functions, differents and
//!   discriminants for extensions of fields containing `zeta_p`.
//! - [`fpflag`]: linear algebra over `F_p` and brute-force subspace counts.
//! - [`asfield`]: Artin-Schreier classes over `F_q((pi))`.
//! - [`padic`]: truncated cyclotomic integers and norms.
//!
//! All arithmetic is exact; big values are [`num_bigint::BigInt`].

pub mod asfield;
pub mod breakcalc;
pub mod error;
pub mod fpflag;
pub mod numth;
pub mod padic;

pub use asfield::{ASClass, ASExtensionReport, FqElem, FqField, LaurentSeries};
pub use breakcalc::{BreakProfile, BreakStep, FieldShape, PiecewiseLinear, RamificationReport};
pub use error::{AdmissibilityRule, Error, Result};
pub use fpflag::{FlagSpace, FpMatrix};
pub use padic::{CyclotomicElem, PadicInt};
