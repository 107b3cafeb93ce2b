//! Ramification tables of two families of totally ramified abelian
//! extensions whose filtrations are known explicitly: `Q_p(xi_{p^m})|Q_p`
//! and the extension cut out by `U_m` and a chosen uniformiser.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{rat, to_integer, PiecewiseLinear};
use crate::error::{Error, Result};
use crate::numth::{big_pow, is_prime};

/// Lower-numbering interval `[start, end]` (or `[start, inf)` when
/// `end` is `None`) on which `G_t = G^upper` has order `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerSegment {
    pub start: BigInt,
    pub end: Option<BigInt>,
    pub upper: u64,
    pub order: BigInt,
}

/// `g_1 + ... + g_{p^n - 1}` against `n * g_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiCheck {
    pub n: u64,
    pub g_sum: BigInt,
    pub expected: BigInt,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicTable {
    pub p: u64,
    pub m: u64,
    pub trivial: bool,
    /// `|G^w|` for `w = 0..=m`.
    pub upper_orders: Vec<BigInt>,
    pub lower_segments: Vec<LowerSegment>,
    pub upper_breaks: Vec<u64>,
    pub lower_breaks: Vec<BigInt>,
    pub phi_checks: Vec<PhiCheck>,
    pub discriminant_valuation: BigInt,
    pub closed_form: BigInt,
    /// Lower break `p^(m-1) - 1` of `Q_p(xi_{p^m}) | Q_p(xi_p)`, when `m > 1`.
    pub kummer_break: Option<BigInt>,
}

impl CyclotomicTable {
    pub fn consistent(&self) -> bool {
        self.phi_checks.iter().all(|c| c.ok) && self.discriminant_valuation == self.closed_form
    }
}

/// Ramification of `Q_p(xi_{p^m}) | Q_p`, with
/// `G^w = Ker((Z/p^m)^x -> (Z/p^w)^x)`.
pub fn cyclotomic_table(p: u64, m: u64) -> Result<CyclotomicTable> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let g0 = big_pow(p, m - 1) * BigInt::from(p - 1);
    let order = |w: u64| {
        if w == 0 {
            g0.clone()
        } else {
            big_pow(p, m - w)
        }
    };
    let upper_orders: Vec<BigInt> = (0..=m).map(order).collect();

    // G_0 = G^0; G_t = G^w for p^(w-1) <= t <= p^w - 1; trivial from p^(m-1)
    let mut lower_segments = vec![LowerSegment {
        start: BigInt::zero(),
        end: Some(BigInt::zero()),
        upper: 0,
        order: g0.clone(),
    }];
    for w in 1..m {
        lower_segments.push(LowerSegment {
            start: big_pow(p, w - 1),
            end: Some(big_pow(p, w) - 1),
            upper: w,
            order: order(w),
        });
    }
    lower_segments.push(LowerSegment {
        start: big_pow(p, m - 1),
        end: None,
        upper: m,
        order: BigInt::one(),
    });

    let phi_checks = (1..=m)
        .map(|n| {
            let limit = big_pow(p, n) - 1;
            let mut g_sum = BigInt::zero();
            for seg in &lower_segments[1..] {
                if seg.start > limit {
                    break;
                }
                let hi = match &seg.end {
                    Some(e) if *e < limit => e.clone(),
                    _ => limit.clone(),
                };
                g_sum += (&hi - &seg.start + 1) * &seg.order;
            }
            let expected = BigInt::from(n) * &g0;
            PhiCheck {
                n,
                ok: g_sum == expected,
                g_sum,
                expected,
            }
        })
        .collect();

    let mut disc = &g0 - 1;
    for seg in &lower_segments[1..] {
        if let Some(end) = &seg.end {
            disc += (end - &seg.start + 1) * (&seg.order - 1);
        }
    }
    let closed = BigInt::from(m) * &g0 - big_pow(p, m - 1);

    let first = if p == 2 { 1 } else { 0 };
    let upper_breaks: Vec<u64> = (first..m).collect();
    let lower_breaks = upper_breaks.iter().map(|&w| big_pow(p, w) - 1).collect();

    Ok(CyclotomicTable {
        p,
        m,
        trivial: p == 2 && m == 1,
        upper_orders,
        lower_segments,
        upper_breaks,
        lower_breaks,
        phi_checks,
        discriminant_valuation: disc,
        closed_form: closed,
        kummer_break: (m > 1).then(|| big_pow(p, m - 1) - 1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFieldTable {
    pub p: u64,
    pub f: u32,
    pub q: BigInt,
    pub m: u64,
    pub trivial: bool,
    pub inertia_order: BigInt,
    /// `(G^0 : G^n)` for `n = 0..=m`.
    pub index_table: Vec<BigInt>,
    pub upper_breaks: Vec<u64>,
    pub lower_breaks: Vec<BigInt>,
    /// Different valuation from the break formula.
    pub discriminant_valuation: BigInt,
    /// The same quantity as `sum_t (Card G_t - 1)`.
    pub direct_sum: BigInt,
    pub closed_form: BigInt,
}

impl ClassFieldTable {
    pub fn consistent(&self) -> bool {
        self.discriminant_valuation == self.closed_form && self.direct_sum == self.closed_form
    }
}

/// Totally ramified abelian `L|K` with `N(o_L^x) = U_m` and the
/// uniformiser a norm; `Gal(L|K) = o_K^x / U_m`, `q = p^f`.
pub fn classfield_example_table(p: u64, f: u32, m: u64) -> Result<ClassFieldTable> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 || f == 0 {
        return Err(Error::OutOfRange("m and f must be at least 1".into()));
    }
    let q = big_pow(p, f as u64);
    let g0: BigInt = num_traits::pow(q.clone(), (m - 1) as usize) * (&q - 1);
    let index = |n: u64| -> BigInt {
        if n == 0 {
            BigInt::one()
        } else {
            num_traits::pow(q.clone(), (n - 1) as usize) * (&q - 1)
        }
    };
    let index_table: Vec<BigInt> = (0..=m).map(index).collect();

    // psi has slope (G^0 : G^n) on ]n-1, n], and slope g0 beyond m-1
    let interior: Vec<u64> = (1..m).collect();
    let slopes: Vec<BigInt> = (1..=m).map(index).collect();
    let psi = PiecewiseLinear::from_integer_segments(&interior, &slopes)?;

    let upper_breaks: Vec<u64> = (0..m).filter(|&n| index(n) != index(n + 1)).collect();
    let lower_breaks: Vec<BigInt> = upper_breaks
        .iter()
        .map(|&u| to_integer(&psi.eval(&rat(u))))
        .collect::<Result<_>>()?;

    let via_psi = match (upper_breaks.last(), lower_breaks.last()) {
        (Some(&u), Some(l)) => BigInt::from(1 + u) * &g0 - (l + 1),
        _ => BigInt::zero(),
    };
    let mut direct = &g0 - 1;
    for n in 1..=m {
        direct += &g0 - index(n);
    }
    let qm1 = num_traits::pow(q.clone(), (m - 1) as usize);
    let closed = BigInt::from(m) * &qm1 * (&q - 1) - &qm1;

    Ok(ClassFieldTable {
        p,
        f,
        m,
        trivial: g0.is_one(),
        inertia_order: g0,
        index_table,
        upper_breaks,
        lower_breaks,
        discriminant_valuation: via_psi,
        direct_sum: direct,
        closed_form: closed,
        q,
    })
}
