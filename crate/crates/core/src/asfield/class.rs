//! Canonical representatives of `K / wp(K)` and the extensions they define.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::fq::{FqElem, FqField};
use super::series::LaurentSeries;
use crate::breakcalc::{
    c_of, lower_break_formula, nth_coprime, report_from_steps, BreakStep, RamificationReport,
};
use crate::error::{Error, Result};
use crate::fpflag::FpMatrix;
use crate::numth::big_pow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Zero,
    Unramified,
    Ramified,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Zero => "zero",
            ClassKind::Unramified => "unramified",
            ClassKind::Ramified => "ramified",
        }
    }
}

/// Reduced class: poles at exponents prime to `p` plus `trace_part * tau0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASClass {
    field: Arc<FqField>,
    poles: BTreeMap<i64, FqElem>,
    trace_part: u64,
    level: u64,
    kind: ClassKind,
}

impl ASClass {
    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    /// Nonzero pole coefficients keyed by (negative) exponent.
    pub fn poles(&self) -> &BTreeMap<i64, FqElem> {
        &self.poles
    }

    pub fn trace_part(&self) -> u64 {
        self.trace_part
    }

    /// Minus the most negative exponent, or 0 without poles.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    /// `sum c_n pi^n + trace_part * tau0`, to the given precision (at least 1).
    pub fn representative(&self, precision: i64) -> LaurentSeries {
        let k = &self.field;
        let mut terms: Vec<(i64, FqElem)> =
            self.poles.iter().map(|(&e, c)| (e, c.clone())).collect();
        terms.push((0, k.scale(self.trace_part, k.tau0())));
        LaurentSeries::from_terms(k, &terms, precision.max(1))
    }
}

/// Reduces `a` modulo `wp(K)`: the most negative pole at an exponent `-p i`
/// is replaced by its p-th root at `-i` until all poles are prime to `p`,
/// and the constant term is replaced by its trace. Only coefficients of
/// `pi^e` with `e <= 0` are used.
pub fn reduce_class(a: &LaurentSeries) -> Result<ASClass> {
    if a.precision() < 1 {
        return Err(Error::Precision(format!(
            "reduction needs the constant term (precision {} < 1)",
            a.precision()
        )));
    }
    let field = a.field().clone();
    let p = field.p() as i64;
    let mut poles: BTreeMap<i64, FqElem> = a
        .terms()
        .filter(|(e, _)| *e < 0)
        .map(|(e, c)| (e, c.clone()))
        .collect();
    while let Some((&e, _)) = poles.iter().find(|(&e, _)| e % p == 0) {
        let c = poles.remove(&e).unwrap_or_else(|| field.zero());
        let u = field.pth_root(&c);
        let target = e / p;
        let slot = poles.entry(target).or_insert_with(|| field.zero());
        *slot = field.add(slot, &u);
        if slot.is_zero() {
            poles.remove(&target);
        }
    }
    let constant = a.coeff(0).unwrap_or_else(|| field.zero());
    let trace_part = field.trace(&constant);
    let level = poles.keys().next().map_or(0, |&e| (-e) as u64);
    let kind = if !poles.is_empty() {
        ClassKind::Ramified
    } else if trace_part != 0 {
        ClassKind::Unramified
    } else {
        ClassKind::Zero
    };
    Ok(ASClass {
        field,
        poles,
        trace_part,
        level,
        kind,
    })
}

/// Upper (and lower) break of the degree-p extension of a ramified class.
pub fn line_break(class: &ASClass) -> Result<u64> {
    match class.kind {
        ClassKind::Ramified => Ok(class.level),
        other => Err(Error::WrongKind {
            expected: "ramified",
            actual: other.name(),
        }),
    }
}

/// `(x, y)` with `x` in `[1, p-1]`, `-m x = 1 (mod p)` and `-m x + p y = 1`.
pub fn uniformiser_exponents(m: u64, p: u64) -> Result<(u64, u64)> {
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::OutOfRange(format!(
            "m = {m} must be positive and prime to p = {p}"
        )));
    }
    let x = (1..p)
        .find(|&x| (m % p) * x % p == p - 1)
        .ok_or_else(|| Error::Inconsistent(format!("no inverse of -{m} mod {p}")))?;
    Ok((x, (1 + m * x) / p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASExtensionReport {
    pub generators: usize,
    /// `F_p`-dimension of the span of the generators' classes.
    pub dimension: usize,
    pub ramification: RamificationReport,
}

/// Report for the cyclic degree-p extension of a nonzero class.
pub fn degree_p_report(class: &ASClass) -> Result<ASExtensionReport> {
    let ramification = match class.kind {
        ClassKind::Zero => {
            return Err(Error::TrivialExtension(
                "the zero class defines K itself".into(),
            ))
        }
        ClassKind::Unramified => report_from_steps(class.field.p(), true, &[])?,
        ClassKind::Ramified => {
            report_from_steps(class.field.p(), false, &[BreakStep::new(class.level, 1)])?
        }
    };
    Ok(ASExtensionReport {
        generators: 1,
        dimension: 1,
        ramification,
    })
}

/// `F_p`-coordinates of a class: the trace part, then for each level
/// `n = 1..=max_level` the `f` coefficients of `pi^-n`.
fn coordinates(class: &ASClass, max_level: u64) -> Vec<u64> {
    let f = class.field.f() as usize;
    let mut v = vec![0u64; 1 + max_level as usize * f];
    v[0] = class.trace_part;
    for (&e, c) in &class.poles {
        let n = (-e) as usize;
        v[1 + (n - 1) * f..1 + n * f].copy_from_slice(c.coeffs());
    }
    v
}

/// Ramification of `K(wp^-1(D))` where `D` is the span of the generators'
/// classes; the break structure comes from `dim(D ∩ level <= j)`.
pub fn extension_report(generators: &[LaurentSeries]) -> Result<ASExtensionReport> {
    let Some(first) = generators.first() else {
        return Err(Error::TrivialExtension("no generators".into()));
    };
    let field = first.field().clone();
    if generators.iter().any(|g| *g.field() != field) {
        return Err(Error::InvalidShape(
            "generators over different fields".into(),
        ));
    }
    let classes: Vec<ASClass> = generators.iter().map(reduce_class).collect::<Result<_>>()?;
    let max_level = classes.iter().map(|c| c.level).max().unwrap_or(0);
    let f = field.f() as usize;
    let cols = 1 + max_level as usize * f;
    let rows: Vec<Vec<u64>> = classes.iter().map(|c| coordinates(c, max_level)).collect();
    let span = FpMatrix::from_rows(field.p(), cols, &rows)?.rref().0;
    let dimension = span.rows();
    if dimension == 0 {
        return Err(Error::TrivialExtension(
            "all generators lie in wp(K)".into(),
        ));
    }
    let dim_at = |j: usize| -> usize {
        let cut = 1 + j * f;
        if cut >= cols {
            dimension
        } else {
            dimension - span.column_slice(cut..cols).rank()
        }
    };
    let has_unramified_part = dim_at(0) == 1;
    let mut steps = Vec::new();
    let mut prev = dim_at(0);
    for j in 1..=max_level as usize {
        let d = dim_at(j);
        if d > prev {
            steps.push(BreakStep::new(j as u64, (d - prev) as u32));
        }
        prev = d;
    }
    let ramification = report_from_steps(field.p(), has_unramified_part, &steps)?;
    Ok(ASExtensionReport {
        generators: generators.len(),
        dimension,
        ramification,
    })
}

/// `tau0` and `e_k pi^-n` for `n` in `[1, m]` prime to `p`: a basis of the
/// image of `p^-m` in `K / wp(K)`.
pub fn level_generators(field: &Arc<FqField>, m: u64, precision: i64) -> Vec<LaurentSeries> {
    let mut out = vec![LaurentSeries::monomial(
        field,
        field.tau0().clone(),
        0,
        precision,
    )];
    for n in (1..=m).filter(|n| n % field.p() != 0) {
        for k in 0..field.f() as usize {
            out.push(LaurentSeries::monomial(
                field,
                field.basis(k),
                -(n as i64),
                precision,
            ));
        }
    }
    out
}

/// Closed-form data of `M_m = K(wp^-1(p^-m))`: breaks `b^(i)` for
/// `i <= c(m)` of dimension `f`, lower breaks from the geometric-sum
/// formula, and different `(1+b^(c))q^c - (1+b_(c))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelClosedForm {
    pub degree: BigInt,
    pub upper_breaks: Vec<u64>,
    pub lower_breaks: Vec<BigInt>,
    pub different_valuation: BigInt,
    pub discriminant_valuation: BigInt,
}

pub fn level_closed_form(p: u64, f: u32, m: u64) -> LevelClosedForm {
    let c = c_of(m, p);
    let q = big_pow(p, f as u64);
    let upper_breaks: Vec<u64> = (1..=c).map(|i| nth_coprime(i, p)).collect();
    let lower_breaks: Vec<BigInt> = (1..=c).map(|i| lower_break_formula(p, &q, i)).collect();
    let different_valuation = match (upper_breaks.last(), lower_breaks.last()) {
        (Some(&u), Some(l)) => {
            BigInt::from(1 + u) * num_traits::pow(q.clone(), c as usize) - (l + 1)
        }
        _ => BigInt::from(0),
    };
    LevelClosedForm {
        degree: big_pow(p, 1 + c * f as u64),
        discriminant_valuation: &different_valuation * BigInt::from(p),
        different_valuation,
        upper_breaks,
        lower_breaks,
    }
}
