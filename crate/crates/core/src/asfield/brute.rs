//! `dim_{F_p} (p^-m + wp(K)) / wp(K)` by linear algebra on truncated series.

use super::fq::FqField;
use crate::error::{Error, Result};
use crate::fpflag::FpMatrix;

const MAX_COLUMNS: usize = 4096;

/// Works in `K_{>= -p m} / p^N`, written in the `F_p`-basis `x^k pi^j`.
/// With `P` the image of `p^-m` and `W = wp(p^-m)` (any `x` with
/// `wp(x) in p^-m` has `v(x) >= -m/p`), the quotient dimension is
/// `rank[P; W] - rank W`.
pub fn brute_dimension(p: u64, f: u32, m: u64, precision: i64) -> Result<usize> {
    if precision < 1 {
        return Err(Error::Precision(format!(
            "need precision at least 1, got {precision}"
        )));
    }
    let field = FqField::new(p, f)?;
    let f = f as usize;
    let low = -((p * m) as i64);
    let cols = (precision - low) as usize * f;
    if cols > MAX_COLUMNS {
        return Err(Error::Guard(format!(
            "{cols} coordinates exceed the limit {MAX_COLUMNS}"
        )));
    }
    let column = |exp: i64, k: usize| (exp - low) as usize * f + k;

    let mut pole_rows = FpMatrix::zeros(p, 0, cols);
    let mut wp_rows = FpMatrix::zeros(p, 0, cols);
    for j in -(m as i64)..precision {
        for k in 0..f {
            let mut unit = vec![0u64; cols];
            unit[column(j, k)] = 1;
            pole_rows.push_row(&unit)?;

            // wp(x^k pi^j) = (x^k)^p pi^(pj) - x^k pi^j
            let b = field.basis(k);
            let frob = field.frob(&b);
            let mut row = vec![0u64; cols];
            if p as i64 * j < precision {
                for (t, &c) in frob.coeffs().iter().enumerate() {
                    let slot = &mut row[column(p as i64 * j, t)];
                    *slot = (*slot + c) % p;
                }
            }
            let slot = &mut row[column(j, k)];
            *slot = (*slot + p - 1) % p;
            wp_rows.push_row(&row)?;
        }
    }
    let w_rank = wp_rows.rank();
    let mut both = wp_rows;
    for r in 0..pole_rows.rows() {
        both.push_row(pole_rows.row(r))?;
    }
    Ok(both.rank() - w_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breakcalc::c_of;

    #[test]
    fn examples() {
        assert_eq!(brute_dimension(2, 1, 0, 2).unwrap(), 1);
        assert_eq!(brute_dimension(2, 1, 3, 2).unwrap(), 3);
        assert_eq!(brute_dimension(3, 2, 4, 2).unwrap(), 7);
    }

    #[test]
    fn level_law() {
        for (p, f) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let mut prev = brute_dimension(p, f, 0, 1).unwrap();
            for m in 1..=12 {
                let d = brute_dimension(p, f, m, 1).unwrap();
                assert_eq!(d, 1 + c_of(m, p) as usize * f as usize);
                assert_eq!(d - prev, if m % p == 0 { 0 } else { f as usize });
                prev = d;
            }
        }
    }
}
