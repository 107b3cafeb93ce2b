//! Truncated Laurent series `sum_{i >= v} c_i pi^i + O(pi^N)` over `F_q`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::fq::{FqElem, FqField};
use crate::error::{Error, Result};

/// Coefficients are stored for exponents `start..precision`; the leading
/// one is nonzero unless the series is zero to precision, in which case
/// `coeffs` is empty and `start == precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Arc<FqField>,
    start: i64,
    coeffs: Vec<FqElem>,
    precision: i64,
}

impl LaurentSeries {
    pub fn zero(field: &Arc<FqField>, precision: i64) -> Self {
        LaurentSeries {
            field: field.clone(),
            start: precision,
            coeffs: Vec::new(),
            precision,
        }
    }

    /// Series from `(exponent, coefficient)` terms; repeated exponents add
    /// up and terms at or beyond `precision` are dropped.
    pub fn from_terms(field: &Arc<FqField>, terms: &[(i64, FqElem)], precision: i64) -> Self {
        let low = terms
            .iter()
            .map(|t| t.0)
            .min()
            .unwrap_or(precision)
            .min(precision);
        let mut coeffs = vec![field.zero(); (precision - low) as usize];
        for (e, c) in terms {
            if *e < precision {
                let slot = &mut coeffs[(e - low) as usize];
                *slot = field.add(slot, c);
            }
        }
        Self::normalized(field.clone(), low, coeffs, precision)
    }

    pub fn monomial(field: &Arc<FqField>, c: FqElem, exp: i64, precision: i64) -> Self {
        Self::from_terms(field, &[(exp, c)], precision)
    }

    fn normalized(
        field: Arc<FqField>,
        mut start: i64,
        mut coeffs: Vec<FqElem>,
        precision: i64,
    ) -> Self {
        let lead = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        start += lead as i64;
        if coeffs.is_empty() {
            start = precision;
        }
        LaurentSeries {
            field,
            start,
            coeffs,
            precision,
        }
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    /// Absolute precision `N`: the series is known modulo `pi^N`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// `None` when the series is zero to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `pi^exp`; `None` beyond the precision.
    pub fn coeff(&self, exp: i64) -> Option<FqElem> {
        if exp >= self.precision {
            return None;
        }
        if exp < self.start {
            return Some(self.field.zero());
        }
        Some(self.coeffs[(exp - self.start) as usize].clone())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FqElem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Same series known only modulo `pi^n` (no-op when `n >= N`).
    pub fn truncate(&self, n: i64) -> Self {
        if n >= self.precision {
            return self.clone();
        }
        let terms: Vec<(i64, FqElem)> = self.terms().map(|(e, c)| (e, c.clone())).collect();
        Self::from_terms(&self.field, &terms, n)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.field, other.field, "series over different fields");
        let precision = self.precision.min(other.precision);
        let mut terms: Vec<(i64, FqElem)> = self.terms().map(|(e, c)| (e, c.clone())).collect();
        for (e, c) in other.terms() {
            let c = if negate { self.field.neg(c) } else { c.clone() };
            terms.push((e, c));
        }
        Self::from_terms(&self.field, &terms, precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        Self::zero(&self.field, self.precision).sub(self)
    }

    /// Product with precision `min(N_a + v_b, N_b + v_a)`; a series that is
    /// zero to precision counts as having valuation at least its precision.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "series over different fields");
        let va = self.valuation().unwrap_or(self.precision);
        let vb = other.valuation().unwrap_or(other.precision);
        let precision = (self.precision + vb).min(other.precision + va);
        let k = &self.field;
        let mut terms = Vec::new();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                if ea + eb < precision {
                    terms.push((ea + eb, k.mul(ca, cb)));
                }
            }
        }
        Self::from_terms(k, &terms, precision)
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        let terms: Vec<(i64, FqElem)> = self
            .terms()
            .map(|(e, x)| (e, self.field.mul(c, x)))
            .collect();
        Self::from_terms(&self.field, &terms, self.precision)
    }

    /// Multiplication by `pi^k`.
    pub fn shift(&self, k: i64) -> Self {
        let terms: Vec<(i64, FqElem)> = self.terms().map(|(e, c)| (e + k, c.clone())).collect();
        Self::from_terms(&self.field, &terms, self.precision + k)
    }

    /// `x^p`, known modulo `pi^(pN)`.
    pub fn frob(&self) -> Self {
        let p = self.field.p() as i64;
        let terms: Vec<(i64, FqElem)> = self
            .terms()
            .map(|(e, c)| (p * e, self.field.frob(c)))
            .collect();
        Self::from_terms(&self.field, &terms, p * self.precision)
    }

    /// `x^p - x`.
    pub fn wp(&self) -> Self {
        self.frob().sub(self)
    }

    /// Equality of the known coefficients below `min(N_a, N_b)`.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.precision.min(other.precision);
        self.truncate(n) == other.truncate(n)
    }

    /// Uniformly random coefficients on `[low, precision)`.
    pub fn random<R: Rng + ?Sized>(
        field: &Arc<FqField>,
        rng: &mut R,
        low: i64,
        precision: i64,
    ) -> Self {
        let q = field.order();
        let terms: Vec<(i64, FqElem)> = (low..precision)
            .map(|e| {
                let n = rng.random_range(0..q);
                (
                    e,
                    field
                        .elements()
                        .nth(n as usize)
                        .unwrap_or_else(|| field.zero()),
                )
            })
            .collect();
        Self::from_terms(field, &terms, precision)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, fmtr: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(fmtr, " + ")?;
            }
            first = false;
            write!(fmtr, "{}*pi^{e}", fmt_elem(c))?;
        }
        if first {
            write!(fmtr, "0")?;
        }
        write!(fmtr, " + O(pi^{})", self.precision)
    }
}

/// `[c0,c1,...]`, or the bare residue when `f = 1`.
pub fn fmt_elem(c: &FqElem) -> String {
    match c.coeffs() {
        [x] => x.to_string(),
        cs => format!(
            "[{}]",
            cs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        ),
    }
}

/// The unique `x` with `v(x) >= 1` and `x^p - x = a`, by iterating
/// `x <- x^p - a` until it stabilises modulo `pi^N`.
pub fn solve_wp_in_maximal_ideal(a: &LaurentSeries) -> Result<LaurentSeries> {
    let n = a.precision();
    if n < 1 {
        return Err(Error::Precision(format!(
            "need precision at least 1, got {n}"
        )));
    }
    if let Some(v) = a.valuation() {
        if v < 1 {
            return Err(Error::OutOfRange(format!(
                "a must lie in the maximal ideal (v(a) = {v})"
            )));
        }
    }
    let mut x = a.neg();
    // each round multiplies the valuation of the error by p
    for _ in 0..=64 {
        let next = x.frob().sub(a).truncate(n);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::Inconsistent(
        "fixed-point iteration did not converge".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, f: u32) -> Arc<FqField> {
        FqField::new(p, f).unwrap()
    }

    #[test]
    fn precision_rules() {
        let k = field(3, 1);
        let a = LaurentSeries::from_terms(&k, &[(-2, k.one()), (1, k.one())], 5);
        let b = LaurentSeries::from_terms(&k, &[(1, k.one())], 4);
        assert_eq!(a.add(&b).precision(), 4);
        // min(5 + 1, 4 - 2)
        assert_eq!(a.mul(&b).precision(), 2);
        assert_eq!(a.mul(&b).valuation(), Some(-1));
        assert_eq!(a.valuation(), Some(-2));
        assert!(LaurentSeries::zero(&k, 3).valuation().is_none());
    }

    #[test]
    fn wp_examples() {
        let k = field(2, 1);
        let zero = LaurentSeries::zero(&k, 10);
        assert!(zero.wp().is_zero());
        let x = LaurentSeries::monomial(&k, k.one(), -1, 10);
        let expect = LaurentSeries::from_terms(&k, &[(-2, k.one()), (-1, k.one())], 10);
        assert_eq!(x.wp(), expect);
        let k = field(3, 2);
        for c in k.elements() {
            let s = LaurentSeries::monomial(&k, c.clone(), 0, 5).wp();
            let direct = k.sub(&k.frob(&c), &c);
            assert_eq!(s.coeff(0).unwrap(), direct);
        }
    }

    #[test]
    fn solver_examples() {
        let k = field(2, 1);
        let a = LaurentSeries::zero(&k, 20);
        assert!(solve_wp_in_maximal_ideal(&a).unwrap().is_zero());
        let a = LaurentSeries::monomial(&k, k.one(), 1, 20);
        let x = solve_wp_in_maximal_ideal(&a).unwrap();
        assert!(x.wp().agrees_with(&a));
        assert!(x.valuation().unwrap() >= 1);
        // x = pi + pi^2 + pi^4 + pi^8 + pi^16 + ... (sign-free in characteristic 2)
        let expect: Vec<(i64, FqElem)> = [1, 2, 4, 8, 16].iter().map(|&e| (e, k.one())).collect();
        assert_eq!(x, LaurentSeries::from_terms(&k, &expect, 20));
        let bad = LaurentSeries::monomial(&k, k.one(), 0, 20);
        assert!(solve_wp_in_maximal_ideal(&bad).is_err());
    }
}
