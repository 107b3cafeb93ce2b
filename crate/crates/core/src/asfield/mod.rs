//! Artin-Schreier theory over `K = F_q((pi))`: the finite field and series
//! arithmetic, reduction of classes in `K / wp(K)`, and ramification of the
//! elementary abelian p-extensions they generate.
//!
//! Every class has a unique representative
//! `sum_{n prime to p} c_n pi^-n + t * tau0` where `tau0` is a fixed element
//! of trace 1. The level `m` of a ramified class is both its upper and its
//! lower break, and `K(wp^-1(p^-m))` has degree `p^(1 + c(m) f)`.

mod brute;
mod class;
mod fq;
mod oracle;
mod series;

pub use brute::brute_dimension;
pub use class::{
    degree_p_report, extension_report, level_closed_form, level_generators, line_break,
    reduce_class, uniformiser_exponents, ASClass, ASExtensionReport, ClassKind, LevelClosedForm,
};
pub use fq::{FqElem, FqField, ModulusTable};
pub use oracle::{frobenius_shift, verify_break_oracle};
pub use series::{fmt_elem, solve_wp_in_maximal_ideal, LaurentSeries};
