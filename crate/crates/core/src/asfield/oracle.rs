//! Independent checks by explicit computation inside the degree-p
//! extensions `K[alpha]/(alpha^p - alpha - a)` and `k[T]/(T^p - T - b)`.

use super::class::{uniformiser_exponents, ASClass, ClassKind};
use super::fq::{FqElem, FqField};
use super::series::LaurentSeries;
use crate::error::{Error, Result};

/// `sum_{j<p} c_j alpha^j` with `alpha^p = alpha + a`.
#[derive(Debug, Clone)]
struct LElem(Vec<LaurentSeries>);

struct ExtensionModel<'a> {
    p: usize,
    a: &'a LaurentSeries,
    precision: i64,
}

impl ExtensionModel<'_> {
    fn constant(&self, s: LaurentSeries) -> LElem {
        let mut v = vec![LaurentSeries::zero(self.a.field(), self.precision); self.p];
        v[0] = s;
        LElem(v)
    }

    fn alpha_plus(&self, c: u64) -> LElem {
        let k = self.a.field();
        let mut v = vec![LaurentSeries::zero(k, self.precision); self.p];
        v[0] = LaurentSeries::monomial(k, k.from_int(c), 0, self.precision);
        if self.p > 1 {
            v[1] = LaurentSeries::monomial(k, k.one(), 0, self.precision);
        }
        LElem(v)
    }

    fn mul(&self, x: &LElem, y: &LElem) -> LElem {
        let p = self.p;
        let mut prod: Vec<Option<LaurentSeries>> = vec![None; 2 * p - 1];
        let accumulate = |slot: &mut Option<LaurentSeries>, term: LaurentSeries| {
            *slot = Some(match slot.take() {
                Some(s) => s.add(&term),
                None => term,
            });
        };
        for (i, xi) in x.0.iter().enumerate() {
            for (j, yj) in y.0.iter().enumerate() {
                accumulate(&mut prod[i + j], xi.mul(yj));
            }
        }
        // alpha^(p+t) = alpha^(t+1) + a alpha^t
        for d in (p..2 * p - 1).rev() {
            if let Some(c) = prod[d].take() {
                let t = d - p;
                accumulate(&mut prod[t], c.mul(self.a));
                accumulate(&mut prod[t + 1], c);
            }
        }
        let zero = LaurentSeries::zero(self.a.field(), self.precision);
        LElem(
            prod.into_iter()
                .take(p)
                .map(|c| c.unwrap_or_else(|| zero.clone()))
                .collect(),
        )
    }

    fn sub(&self, x: &LElem, y: &LElem) -> LElem {
        LElem(x.0.iter().zip(&y.0).map(|(a, b)| a.sub(b)).collect())
    }

    fn pow(&self, x: &LElem, e: u64) -> LElem {
        let k = self.a.field();
        let mut acc = self.constant(LaurentSeries::monomial(k, k.one(), 0, self.precision));
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// `min_j (p v(c_j) - m j)`; the values are distinct mod `p`, so this is
    /// the valuation in `L` normalised by `v_L(pi) = p`.
    fn valuation(&self, x: &LElem, m: u64) -> Result<i64> {
        let p = self.p as i64;
        let m = m as i64;
        let mut certified: Option<i64> = None;
        let mut unknown_floor: Option<i64> = None;
        for (j, c) in x.0.iter().enumerate() {
            let j = j as i64;
            match c.valuation() {
                Some(v) => {
                    let w = p * v - m * j;
                    certified = Some(certified.map_or(w, |b| b.min(w)));
                }
                None => {
                    let w = p * c.precision() - m * j;
                    unknown_floor = Some(unknown_floor.map_or(w, |b| b.min(w)));
                }
            }
        }
        match (certified, unknown_floor) {
            (Some(v), None) => Ok(v),
            (Some(v), Some(floor)) if v < floor => Ok(v),
            _ => Err(Error::Precision(
                "precision too small to certify the valuation; raise pi_precision".into(),
            )),
        }
    }
}

/// Measures `v_L(sigma(w) - w)` for `w = alpha^x pi^y` and `sigma(alpha) =
/// alpha + 1`, after checking that `w` is a uniformiser and that `sigma`
/// respects the defining equation. Returns `m + 1` for a class of level `m`.
pub fn verify_break_oracle(class: &ASClass, pi_precision: i64) -> Result<i64> {
    if class.kind() != ClassKind::Ramified {
        return Err(Error::WrongKind {
            expected: "ramified",
            actual: class.kind().name(),
        });
    }
    let k = class.field();
    let p = k.p();
    let m = class.level();
    let (x, y) = uniformiser_exponents(m, p)?;
    let a = class.representative(pi_precision);
    let model = ExtensionModel {
        p: p as usize,
        a: &a,
        precision: pi_precision,
    };

    let alpha = model.alpha_plus(0);
    let sigma_alpha = model.alpha_plus(1);
    let a_elem = model.constant(a.clone());
    let relation = model.sub(
        &model.sub(&model.pow(&sigma_alpha, p), &sigma_alpha),
        &a_elem,
    );
    if relation.0.iter().any(|c| !c.is_zero()) {
        return Err(Error::Inconsistent(
            "alpha -> alpha + 1 does not preserve the equation".into(),
        ));
    }

    let pi_y = model.constant(LaurentSeries::monomial(
        k,
        k.one(),
        y as i64,
        pi_precision + y as i64,
    ));
    let w = model.mul(&model.pow(&alpha, x), &pi_y);
    let v_w = model.valuation(&w, m)?;
    if v_w != 1 {
        return Err(Error::Inconsistent(format!(
            "alpha^{x} pi^{y} has valuation {v_w}, not 1"
        )));
    }
    let sigma_w = model.mul(&model.pow(&sigma_alpha, x), &pi_y);
    model.valuation(&model.sub(&sigma_w, &w), m)
}

/// In `k[T]/(T^p - T - b)`, returns `T^q - T`, which must be the constant
/// `trace(b)`; errors if it is not a constant.
pub fn frobenius_shift(field: &FqField, b: &FqElem) -> Result<FqElem> {
    let p = field.p() as usize;
    let mul = |x: &[FqElem], y: &[FqElem]| -> Vec<FqElem> {
        let mut prod = vec![field.zero(); 2 * p - 1];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                prod[i + j] = field.add(&prod[i + j], &field.mul(xi, yj));
            }
        }
        for d in (p..2 * p - 1).rev() {
            let c = std::mem::replace(&mut prod[d], field.zero());
            let t = d - p;
            prod[t + 1] = field.add(&prod[t + 1], &c);
            prod[t] = field.add(&prod[t], &field.mul(&c, b));
        }
        prod.truncate(p);
        prod
    };
    let mut acc = vec![field.zero(); p];
    acc[1] = field.one();
    // T^(p^f) by f successive p-th powers
    for _ in 0..field.f() {
        let mut power = acc.clone();
        for _ in 1..p {
            power = mul(&power, &acc);
        }
        acc = power;
    }
    acc[1] = field.sub(&acc[1], &field.one());
    if acc[1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::Inconsistent("T^q - T is not a constant".into()));
    }
    Ok(acc[0].clone())
}
