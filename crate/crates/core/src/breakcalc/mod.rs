//! Integer combinatorics of ramification for elementary abelian
//! p-extensions: break sequences, Herbrand functions, differents,
//! discriminants and extension counts.

mod piecewise;
mod profile;
mod tables;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numth::{big_pow, is_prime};

pub use piecewise::PiecewiseLinear;
pub use profile::{
    custom_extension_report, different_from_profile, direct_different, extremal_discriminant,
    herbrand_different, maximal_extension_report, maximal_profile, nonkummerian_maximal_report,
    psi_from_steps, psi_of_profile, report_from_steps, BreakProfile, BreakStep, ExtremalMode,
    IndexSegment, RamificationReport,
};
pub use tables::{
    classfield_example_table, cyclotomic_table, ClassFieldTable, CyclotomicTable, LowerSegment,
    PhiCheck,
};

pub(crate) use piecewise::{rat, to_integer};

/// Ramification shape `(p, e1, f)` of a finite extension of `Q_p(zeta_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldShape {
    p: u64,
    e1: u64,
    f: u32,
}

impl FieldShape {
    pub fn new(p: u64, e1: u64, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e1 == 0 {
            return Err(Error::InvalidShape("e1 must be at least 1".into()));
        }
        if f == 0 {
            return Err(Error::InvalidShape("f must be at least 1".into()));
        }
        if (p - 1)
            .checked_mul(e1)
            .and_then(|e| e.checked_mul(p))
            .is_none()
        {
            return Err(Error::InvalidShape("e1 too large".into()));
        }
        Ok(FieldShape { p, e1, f })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e1(&self) -> u64 {
        self.e1
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Absolute ramification index `(p-1)*e1`.
    pub fn e(&self) -> u64 {
        (self.p - 1) * self.e1
    }

    /// Residue field cardinality `p^f`.
    pub fn q(&self) -> BigInt {
        big_pow(self.p, self.f as u64)
    }

    /// The largest upper break `p*e1`.
    pub fn top(&self) -> u64 {
        self.p * self.e1
    }

    /// `F_p`-dimension `2 + e*f` of `K^x / K^xp`.
    pub fn kummer_dimension(&self) -> u64 {
        2 + self.e() * self.f as u64
    }
}

/// `floor((i-1)/(p-1))`.
pub fn a_of(i: u64, p: u64) -> u64 {
    debug_assert!(i >= 1 && p >= 2);
    (i - 1) / (p - 1)
}

/// Number of integers in `[1, m]` prime to `p`.
pub fn c_of(m: u64, p: u64) -> u64 {
    m - m / p
}

/// The i-th positive integer prime to `p`, namely `i + a(i)`.
pub fn nth_coprime(i: u64, p: u64) -> u64 {
    i + a_of(i, p)
}

/// Upper breaks `b^(1) < ... < b^(e) < p*e1` of the maximal exponent-p
/// kummerian extension.
pub fn upper_breaks(shape: &FieldShape) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=shape.e()).map(|i| nth_coprime(i, shape.p)).collect();
    out.push(shape.top());
    out
}

/// Closed form `(1+q+...+q^(i-1)) + (q^(p-1)+...+q^(a(i)(p-1)))`.
pub fn lower_break_formula(p: u64, q: &BigInt, i: u64) -> BigInt {
    let mut geometric = BigInt::zero();
    let mut power = BigInt::one();
    for _ in 0..i {
        geometric += &power;
        power *= q;
    }
    let step = num_traits::pow(q.clone(), (p - 1) as usize);
    let mut extra = BigInt::zero();
    let mut power = step.clone();
    for _ in 0..a_of(i, p) {
        extra += &power;
        power *= &step;
    }
    geometric + extra
}

/// Lower breaks `b_(1), ..., b_(e+1)` from the closed form, with
/// `b_(e+1) = b_(e) + q^e`.
pub fn lower_breaks(shape: &FieldShape) -> Vec<BigInt> {
    let q = shape.q();
    let e = shape.e();
    let mut out: Vec<BigInt> = (1..=e)
        .map(|i| lower_break_formula(shape.p, &q, i))
        .collect();
    let last = out.last().cloned().unwrap_or_else(BigInt::zero) + num_traits::pow(q, e as usize);
    out.push(last);
    out
}

/// `F_p`-dimension of the upper ramification group `G^n` of the maximal
/// exponent-p kummerian extension.
pub fn dim_upper_group(shape: &FieldShape, n: i64) -> u64 {
    let top = shape.top() as i64;
    let e = shape.e() as i64;
    let f = shape.f as i64;
    let p = shape.p as i64;
    if n <= -1 {
        shape.kummer_dimension()
    } else if n > top {
        0
    } else {
        // G^0 = G^1
        let n = n.max(1);
        (1 + (e - n + 1 + (n - 1) / p) * f) as u64
    }
}

/// `F_p`-dimension of the image of `U_m` in `K^x / K^xp`, obtained by
/// walking the filtration chain down from `U_{p*e1+1} = {1}`.
pub fn dim_bar_u(shape: &FieldShape, m: i64) -> u64 {
    let top = shape.top() as i64;
    if m > top {
        return 0;
    }
    if m <= 0 {
        return shape.kummer_dimension();
    }
    let mut dim = 1u64;
    let mut level = top;
    while level > m {
        level -= 1;
        if level % shape.p as i64 != 0 {
            dim += shape.f as u64;
        }
    }
    dim
}

/// Number of ramified cyclic degree-p extensions whose break is `u`.
pub fn count_single_break(shape: &FieldShape, u: u64) -> Result<BigInt> {
    let q = shape.q();
    if u == shape.top() {
        return Ok(BigInt::from(shape.p) * num_traits::pow(q, shape.e() as usize));
    }
    if u == 0 || u > shape.top() {
        return Err(Error::inadmissible(
            crate::error::AdmissibilityRule::Range,
            format!("break {u} outside [1, {}]", shape.top()),
        ));
    }
    if u.is_multiple_of(shape.p) {
        return Err(Error::inadmissible(
            crate::error::AdmissibilityRule::Coprimality,
            format!("break {u} is divisible by p = {}", shape.p),
        ));
    }
    let i = c_of(u, shape.p);
    let qi = num_traits::pow(q.clone(), i as usize);
    let qi1 = num_traits::pow(q, (i - 1) as usize);
    Ok(BigInt::from(shape.p) * (qi - qi1) / BigInt::from(shape.p - 1))
}

/// Discriminant valuation of the maximal exponent-p kummerian extension via
/// the conductor-discriminant sum, checked against its closed form.
pub fn fdpf_discriminant(shape: &FieldShape) -> Result<BigInt> {
    let p = BigInt::from(shape.p);
    let q = shape.q();
    let e = shape.e();
    let mut sum = BigInt::zero();
    for i in 1..=e {
        let t = nth_coprime(i, shape.p);
        sum += BigInt::from(t + 1) * count_single_break(shape, t)?;
    }
    sum += BigInt::from(shape.top() + 1) * count_single_break(shape, shape.top())?;
    sum *= BigInt::from(shape.p - 1);

    let qe = num_traits::pow(q.clone(), e as usize);
    let qe1 = &qe - 1;
    let qp1 = num_traits::pow(q.clone(), (shape.p - 1) as usize) - 1;
    let lead = BigInt::from(shape.e1) * &p * &p + &p - 1;
    let closed = &p * (lead * &qe - &qe1 / (&q - 1) - &qe1 / qp1);
    if sum != closed {
        return Err(Error::Inconsistent(format!(
            "conductor sum {sum} differs from closed form {closed}"
        )));
    }
    Ok(sum)
}

/// Which lambda function to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaVariant {
    /// `min(p n, n + e)` on `n > 0`.
    NumberField,
    /// `min(n, p n)` on all integers.
    FunctionField,
}

pub fn lambda_map(n: i64, p: u64, e: u64, variant: LambdaVariant) -> Result<i64> {
    let p = p as i64;
    match variant {
        LambdaVariant::NumberField => {
            if n <= 0 {
                return Err(Error::OutOfRange(format!(
                    "number-field lambda needs n > 0, got {n}"
                )));
            }
            Ok((p * n).min(n + e as i64))
        }
        LambdaVariant::FunctionField => Ok(n.min(p * n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(p: u64, e1: u64, f: u32) -> FieldShape {
        FieldShape::new(p, e1, f).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn shape_validation() {
        assert_eq!(FieldShape::new(4, 1, 1), Err(Error::NotPrime(4)));
        assert!(FieldShape::new(3, 0, 1).is_err());
        assert!(FieldShape::new(3, 1, 0).is_err());
        let s = shape(3, 2, 2);
        assert_eq!((s.e(), s.q(), s.top()), (4, BigInt::from(9), 6));
    }

    #[test]
    fn a_and_c() {
        assert_eq!(a_of(1, 3), 0);
        assert_eq!(a_of(4, 3), 1);
        assert_eq!(a_of(5, 2), 4);
        assert_eq!(c_of(0, 3), 0);
        assert_eq!(c_of(5, 3), 4);
        for p in [2, 3, 5, 7] {
            assert_eq!(c_of(p, p), p - 1);
        }
    }

    #[test]
    fn upper_break_examples() {
        assert_eq!(upper_breaks(&shape(3, 1, 1)), vec![1, 2, 3]);
        assert_eq!(upper_breaks(&shape(2, 1, 1)), vec![1, 2]);
        assert_eq!(upper_breaks(&shape(3, 2, 1)), vec![1, 2, 4, 5, 6]);
    }

    #[test]
    fn lower_break_examples() {
        assert_eq!(lower_breaks(&shape(3, 1, 1)), ints(&[1, 4, 13]));
        assert_eq!(lower_breaks(&shape(2, 1, 1)), ints(&[1, 3]));
        assert_eq!(lower_breaks(&shape(2, 2, 1)), ints(&[1, 5, 9]));
    }

    #[test]
    fn lower_breaks_follow_recursion() {
        // b_(1) = 1, b_(i+1) = b_(i) + (b^(i+1) - b^(i)) q^i
        for (p, e1, f) in [(2, 3, 1), (3, 2, 2), (5, 1, 1), (7, 2, 1)] {
            let s = shape(p, e1, f);
            let up = upper_breaks(&s);
            let q = s.q();
            let mut expect = vec![BigInt::one()];
            for i in 1..up.len() {
                let prev = expect[i - 1].clone();
                expect.push(prev + BigInt::from(up[i] - up[i - 1]) * num_traits::pow(q.clone(), i));
            }
            assert_eq!(lower_breaks(&s), expect, "shape {:?}", s);
        }
    }

    #[test]
    fn upper_group_dimensions() {
        let s = shape(3, 2, 2);
        assert_eq!(dim_upper_group(&s, 1), 1 + s.e() * 2);
        assert_eq!(dim_upper_group(&s, s.top() as i64), 1);
        assert_eq!(dim_upper_group(&s, s.top() as i64 + 1), 0);
        assert_eq!(dim_upper_group(&s, 0), dim_upper_group(&s, 1));
        assert_eq!(dim_upper_group(&s, -1), s.kummer_dimension());
        for n in 1..=(s.top() as i64 + 1) {
            assert_eq!(
                dim_upper_group(&s, n) + dim_bar_u(&s, s.top() as i64 - n + 1),
                s.kummer_dimension()
            );
        }
    }

    #[test]
    fn bar_u_chain_codimensions() {
        let s = shape(3, 2, 2);
        // {1} <_1 U_6 <_f U_5 <_f U_4 = U_3 <_f U_2 <_f U_1 <_1 K
        let dims: Vec<u64> = (0..=7).map(|m| dim_bar_u(&s, m)).collect();
        assert_eq!(dims, vec![10, 9, 7, 5, 5, 3, 1, 0]);
    }

    #[test]
    fn single_break_counts() {
        assert_eq!(
            count_single_break(&shape(2, 1, 1), 1).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            count_single_break(&shape(2, 1, 1), 2).unwrap(),
            BigInt::from(4)
        );
        assert_eq!(
            count_single_break(&shape(3, 1, 1), 2).unwrap(),
            BigInt::from(9)
        );
        assert!(count_single_break(&shape(3, 2, 1), 3).is_err());
        assert!(count_single_break(&shape(3, 2, 1), 7).is_err());
        assert!(count_single_break(&shape(3, 2, 1), 0).is_err());
    }

    #[test]
    fn counts_sum_identity() {
        for (p, e1, f) in [(2, 1, 1), (3, 2, 2), (5, 1, 3), (7, 3, 1)] {
            let s = shape(p, e1, f);
            let total: BigInt = (1..=s.e())
                .map(|i| count_single_break(&s, nth_coprime(i, p)).unwrap())
                .sum();
            let qe = num_traits::pow(s.q(), s.e() as usize);
            assert_eq!(total * BigInt::from(p - 1), BigInt::from(p) * (qe - 1));
        }
    }

    #[test]
    fn fdpf_examples() {
        assert_eq!(
            fdpf_discriminant(&shape(2, 1, 1)).unwrap(),
            BigInt::from(16)
        );
        assert_eq!(
            fdpf_discriminant(&shape(3, 1, 1)).unwrap(),
            BigInt::from(282)
        );
        let s = shape(2, 1, 2);
        assert_eq!(
            fdpf_discriminant(&s).unwrap(),
            BigInt::from(2) * maximal_extension_report(&s).unwrap().different_valuation
        );
    }

    #[test]
    fn lambda_examples() {
        let s = shape(5, 2, 1);
        assert_eq!(
            lambda_map(s.e1() as i64, 5, s.e(), LambdaVariant::NumberField).unwrap(),
            (s.e1() + s.e()) as i64
        );
        assert_eq!(
            lambda_map(s.e1() as i64, 5, s.e(), LambdaVariant::NumberField).unwrap(),
            s.top() as i64
        );
        assert!(lambda_map(0, 5, 8, LambdaVariant::NumberField).is_err());
        assert_eq!(
            lambda_map(3, 3, 0, LambdaVariant::FunctionField).unwrap(),
            3
        );
        assert_eq!(
            lambda_map(-2, 3, 0, LambdaVariant::FunctionField).unwrap(),
            -6
        );
    }
}
