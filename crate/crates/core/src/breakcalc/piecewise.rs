//! Exact piecewise-linear functions on `[-1, +inf)`, used for the
//! Hasse-Herbrand functions and their inverses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Continuous piecewise-linear function with `f(0) = 0`, identity on
/// `[-1, 0]`, and positive slopes on `[0, +inf)`.
///
/// `points[k]` is the k-th breakpoint (the first is always the origin) and
/// `slopes[k]` is the slope on the segment to its right; the last slope
/// extends to infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(BigRational, BigRational)>,
    slopes: Vec<BigRational>,
}

impl PiecewiseLinear {
    /// Builds the function from interior abscissae `breaks` (strictly
    /// increasing, all positive) and `breaks.len() + 1` positive slopes.
    pub fn from_segments(breaks: &[BigRational], slopes: Vec<BigRational>) -> Result<Self> {
        if slopes.len() != breaks.len() + 1 {
            return Err(Error::OutOfRange(format!(
                "{} breaks need {} slopes, got {}",
                breaks.len(),
                breaks.len() + 1,
                slopes.len()
            )));
        }
        if slopes.iter().any(|s| !s.is_positive()) {
            return Err(Error::OutOfRange("slopes must be positive".into()));
        }
        let mut points = Vec::with_capacity(breaks.len() + 1);
        points.push((BigRational::zero(), BigRational::zero()));
        for (k, x) in breaks.iter().enumerate() {
            let (px, py) = &points[k];
            if x <= px {
                return Err(Error::OutOfRange(
                    "breakpoints must be positive and strictly increasing".into(),
                ));
            }
            let y = py + (x - px) * &slopes[k];
            points.push((x.clone(), y));
        }
        Ok(PiecewiseLinear { points, slopes })
    }

    /// Integer-breakpoint convenience wrapper around [`Self::from_segments`].
    pub fn from_integer_segments(breaks: &[u64], slopes: &[BigInt]) -> Result<Self> {
        let xs: Vec<BigRational> = breaks.iter().map(|&b| rat(b)).collect();
        let ss = slopes
            .iter()
            .map(|s| BigRational::from_integer(s.clone()))
            .collect();
        Self::from_segments(&xs, ss)
    }

    pub fn breakpoints(&self) -> &[(BigRational, BigRational)] {
        &self.points
    }

    pub fn slopes(&self) -> &[BigRational] {
        &self.slopes
    }

    pub fn initial_slope(&self) -> &BigRational {
        &self.slopes[0]
    }

    /// Exact evaluation. Arguments below zero are mapped by the identity.
    pub fn eval(&self, w: &BigRational) -> BigRational {
        if !w.is_positive() {
            return w.clone();
        }
        // last breakpoint with abscissa < w
        let k = self
            .points
            .iter()
            .rposition(|(x, _)| x < w)
            .unwrap_or_default();
        let (x, y) = &self.points[k];
        y + (w - x) * &self.slopes[k]
    }

    pub fn eval_int(&self, w: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(w)))
    }

    /// The compositional inverse (slopes become reciprocals).
    pub fn inverse(&self) -> PiecewiseLinear {
        let points = self
            .points
            .iter()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect();
        let slopes = self.slopes.iter().map(|s| s.recip()).collect();
        PiecewiseLinear { points, slopes }
    }

    /// True when every slope exceeds the one before it, the shape of a
    /// Herbrand function psi with strictly growing index.
    pub fn slopes_strictly_increasing(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] < w[1])
    }

    /// Value at zero and continuity are built in; exposed for tests.
    pub fn value_at_zero(&self) -> BigRational {
        self.eval(&BigRational::zero())
    }
}

pub(crate) fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Returns the integer value of `r`, or an error when `r` has a denominator.
pub(crate) fn to_integer(r: &BigRational) -> Result<BigInt> {
    if r.denom().is_one() {
        Ok(r.numer().clone())
    } else {
        Err(Error::Inconsistent(format!("expected an integer, got {r}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn eval_and_inverse() {
        // slope 1 up to 1, slope 3 up to 2, slope 9 after
        let psi = PiecewiseLinear::from_integer_segments(
            &[1, 2],
            &[BigInt::from(1), BigInt::from(3), BigInt::from(9)],
        )
        .unwrap();
        assert_eq!(psi.eval_int(1), r(1, 1));
        assert_eq!(psi.eval_int(2), r(4, 1));
        assert_eq!(psi.eval_int(3), r(13, 1));
        assert_eq!(psi.eval(&r(3, 2)), r(5, 2));
        assert_eq!(psi.eval_int(-1), r(-1, 1));
        let phi = psi.inverse();
        assert_eq!(phi.eval_int(13), r(3, 1));
        assert_eq!(phi.eval_int(7), r(7, 3));
        assert!(psi.slopes_strictly_increasing());
        assert!(!phi.slopes_strictly_increasing());
        assert_eq!(psi.value_at_zero(), r(0, 1));
    }

    #[test]
    fn rejects_bad_segments() {
        assert!(
            PiecewiseLinear::from_integer_segments(&[2, 1], &[1.into(), 2.into(), 3.into()])
                .is_err()
        );
        assert!(PiecewiseLinear::from_integer_segments(&[1], &[1.into()]).is_err());
        assert!(PiecewiseLinear::from_integer_segments(&[1], &[1.into(), 0.into()]).is_err());
    }
}
