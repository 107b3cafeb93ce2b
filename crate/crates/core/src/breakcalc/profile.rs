//! Break profiles, Herbrand functions built from them, and ramification
//! reports via the different formula `(1+u_n) g0 - (1 + psi(u_n))`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{
    lower_break_formula, lower_breaks, nth_coprime, rat, to_integer, FieldShape, PiecewiseLinear,
};
use crate::error::{AdmissibilityRule, Error, Result};
use crate::numth::big_pow;

/// One positive upper break `upper` at which the group drops by `p^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BreakStep {
    pub upper: u64,
    pub dim: u32,
}

impl BreakStep {
    pub fn new(upper: u64, dim: u32) -> Self {
        BreakStep { upper, dim }
    }
}

/// Upper breaks of an elementary abelian extension together with the
/// `F_p`-dimension lost at each break. The break at `-1` is the flag
/// `has_unramified_part`, never a list entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BreakProfile {
    pub has_unramified_part: bool,
    pub steps: Vec<BreakStep>,
}

impl BreakProfile {
    pub fn new(has_unramified_part: bool, steps: Vec<BreakStep>) -> Self {
        BreakProfile {
            has_unramified_part,
            steps,
        }
    }

    pub fn totally_ramified(steps: Vec<BreakStep>) -> Self {
        Self::new(false, steps)
    }

    /// Sum of step dimensions, i.e. `log_p` of the inertia order.
    pub fn ramified_dimension(&self) -> u64 {
        self.steps.iter().map(|s| s.dim as u64).sum()
    }

    /// Checks the admissibility rules for kummerian extensions of `shape`.
    pub fn validate(&self, shape: &FieldShape) -> Result<()> {
        let top = shape.top();
        for w in self.steps.windows(2) {
            if w[0].upper >= w[1].upper {
                return Err(Error::inadmissible(
                    AdmissibilityRule::Ordering,
                    format!(
                        "breaks not strictly increasing: {} then {}",
                        w[0].upper, w[1].upper
                    ),
                ));
            }
        }
        let n = self.steps.len();
        for (i, step) in self.steps.iter().enumerate() {
            if step.upper == 0 || step.upper > top {
                return Err(Error::inadmissible(
                    AdmissibilityRule::Range,
                    format!("break {} outside [1, {top}]", step.upper),
                ));
            }
            let is_top = step.upper == top;
            if is_top && i + 1 != n {
                return Err(Error::inadmissible(
                    AdmissibilityRule::Ordering,
                    format!("break {top} must be last"),
                ));
            }
            if !is_top && step.upper % shape.p() == 0 {
                return Err(Error::inadmissible(
                    AdmissibilityRule::Coprimality,
                    format!("break {} is divisible by p = {}", step.upper, shape.p()),
                ));
            }
            if is_top && step.dim != 1 {
                return Err(Error::inadmissible(
                    AdmissibilityRule::TopDimension,
                    format!("top-break dimension must be 1, got {}", step.dim),
                ));
            }
            if step.dim == 0 || step.dim > shape.f() {
                return Err(Error::inadmissible(
                    AdmissibilityRule::Dimension,
                    format!(
                        "dimension {} at break {} outside [1, {}]",
                        step.dim,
                        step.upper,
                        shape.f()
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Profile of the maximal exponent-p kummerian extension: every break with
/// full dimension `f`, `p*e1` with dimension 1, plus the unramified part.
pub fn maximal_profile(shape: &FieldShape) -> BreakProfile {
    let mut steps: Vec<BreakStep> = (1..=shape.e())
        .map(|i| BreakStep::new(nth_coprime(i, shape.p()), shape.f()))
        .collect();
    steps.push(BreakStep::new(shape.top(), 1));
    BreakProfile::new(true, steps)
}

/// Herbrand psi of a break sequence: slope 1 on `[0, u_1]` and
/// `p^(d_1+...+d_i)` on `]u_i, u_{i+1}]`.
pub fn psi_from_steps(p: u64, steps: &[BreakStep]) -> Result<PiecewiseLinear> {
    let breaks: Vec<u64> = steps.iter().map(|s| s.upper).collect();
    let mut slopes = Vec::with_capacity(steps.len() + 1);
    slopes.push(BigInt::one());
    let mut acc = 0u64;
    for s in steps {
        acc += s.dim as u64;
        slopes.push(big_pow(p, acc));
    }
    PiecewiseLinear::from_integer_segments(&breaks, &slopes)
}

pub fn psi_of_profile(shape: &FieldShape, profile: &BreakProfile) -> Result<PiecewiseLinear> {
    profile.validate(shape)?;
    psi_from_steps(shape.p(), &profile.steps)
}

/// `(1 + u_n) g0 - (1 + psi(u_n))` with `g0 = p^(sum d_i)`.
pub fn herbrand_different(p: u64, steps: &[BreakStep]) -> Result<BigInt> {
    let Some(last) = steps.last() else {
        return Ok(BigInt::zero());
    };
    let psi = psi_from_steps(p, steps)?;
    let g0 = big_pow(p, steps.iter().map(|s| s.dim as u64).sum());
    let lower = to_integer(&psi.eval(&rat(last.upper)))?;
    Ok(BigInt::from(1 + last.upper) * g0 - (lower + 1))
}

/// `sum_{t >= 0} (Card G_t - 1)`, summed over the lower-numbering
/// intervals `[0, l_1]`, `]l_i, l_{i+1}]`.
pub fn direct_different(p: u64, steps: &[BreakStep]) -> Result<BigInt> {
    if steps.is_empty() {
        return Ok(BigInt::zero());
    }
    let psi = psi_from_steps(p, steps)?;
    let lower: Vec<BigInt> = steps
        .iter()
        .map(|s| to_integer(&psi.eval(&rat(s.upper))))
        .collect::<Result<_>>()?;
    let total_dim: u64 = steps.iter().map(|s| s.dim as u64).sum();
    let g0 = big_pow(p, total_dim);
    let mut sum = (&lower[0] + 1) * (&g0 - 1);
    let mut lost = 0u64;
    for i in 0..steps.len() - 1 {
        lost += steps[i].dim as u64;
        let card = big_pow(p, total_dim - lost);
        sum += (&lower[i + 1] - &lower[i]) * (card - 1);
    }
    Ok(sum)
}

/// `(G^0 : G^t)` on `]start, end]` (closed at 0 for the first segment);
/// `end == None` means the segment is unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSegment {
    pub start: i64,
    pub end: Option<i64>,
    pub index: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationReport {
    pub p: u64,
    pub has_unramified_part: bool,
    /// Upper breaks, beginning with `-1` when there is an unramified part.
    pub upper_breaks: Vec<i64>,
    /// `F_p`-dimension dropped at each positive upper break.
    pub step_dims: Vec<u32>,
    /// Lower breaks, beginning with `-1` when there is an unramified part.
    pub lower_breaks: Vec<BigInt>,
    pub inertia_order: BigInt,
    pub index_table: Vec<IndexSegment>,
    pub degree: BigInt,
    /// Valuation of the different in the normalized valuation of the top field.
    pub different_valuation: BigInt,
    /// Valuation of the discriminant in the base field.
    pub discriminant_valuation: BigInt,
    pub residual_degree: u64,
}

impl RamificationReport {
    /// Positive lower breaks only.
    pub fn positive_lower_breaks(&self) -> &[BigInt] {
        let skip = usize::from(self.has_unramified_part);
        &self.lower_breaks[skip..]
    }

    pub fn positive_upper_breaks(&self) -> &[i64] {
        let skip = usize::from(self.has_unramified_part);
        &self.upper_breaks[skip..]
    }
}

/// Builds a report from a break sequence without any shape-specific
/// admissibility check; both the number-field and function-field engines
/// land here.
pub fn report_from_steps(
    p: u64,
    has_unramified_part: bool,
    steps: &[BreakStep],
) -> Result<RamificationReport> {
    if steps.is_empty() && !has_unramified_part {
        return Err(Error::TrivialExtension(
            "no breaks and no unramified part".into(),
        ));
    }
    let psi = psi_from_steps(p, steps)?;
    let total_dim: u64 = steps.iter().map(|s| s.dim as u64).sum();
    let g0 = big_pow(p, total_dim);

    let mut upper = Vec::with_capacity(steps.len() + 1);
    let mut lower = Vec::with_capacity(steps.len() + 1);
    if has_unramified_part {
        upper.push(-1);
        lower.push(BigInt::from(-1));
    }
    for s in steps {
        upper.push(s.upper as i64);
        lower.push(to_integer(&psi.eval(&rat(s.upper)))?);
    }

    let mut index_table = Vec::new();
    if let Some(first) = steps.first() {
        index_table.push(IndexSegment {
            start: 0,
            end: Some(first.upper as i64),
            index: BigInt::one(),
        });
        let mut acc = 0u64;
        for (i, s) in steps.iter().enumerate() {
            acc += s.dim as u64;
            index_table.push(IndexSegment {
                start: s.upper as i64,
                end: steps.get(i + 1).map(|n| n.upper as i64),
                index: big_pow(p, acc),
            });
        }
    }

    let different = herbrand_different(p, steps)?;
    let direct = direct_different(p, steps)?;
    if different != direct {
        return Err(Error::Inconsistent(format!(
            "different formula gave {different}, direct sum gave {direct}"
        )));
    }
    let residual_degree = if has_unramified_part { p } else { 1 };
    let degree = &g0 * BigInt::from(residual_degree);
    Ok(RamificationReport {
        p,
        has_unramified_part,
        upper_breaks: upper,
        step_dims: steps.iter().map(|s| s.dim).collect(),
        lower_breaks: lower,
        inertia_order: g0,
        index_table,
        degree,
        discriminant_valuation: &different * BigInt::from(residual_degree),
        different_valuation: different,
        residual_degree,
    })
}

/// Different via the break formula, checked against the direct sum over
/// the lower filtration. `g0` must be the inertia order `p^(sum d_i)`.
pub fn different_from_profile(
    shape: &FieldShape,
    profile: &BreakProfile,
    g0: &BigInt,
) -> Result<BigInt> {
    profile.validate(shape)?;
    if profile.steps.is_empty() {
        if profile.has_unramified_part {
            return Ok(BigInt::zero());
        }
        return Err(Error::TrivialExtension("empty profile".into()));
    }
    let expected = big_pow(shape.p(), profile.ramified_dimension());
    if *g0 != expected {
        return Err(Error::OutOfRange(format!(
            "inertia order {g0} does not match profile (expected {expected})"
        )));
    }
    let formula = herbrand_different(shape.p(), &profile.steps)?;
    let direct = direct_different(shape.p(), &profile.steps)?;
    if formula != direct {
        return Err(Error::Inconsistent(format!(
            "different formula gave {formula}, direct sum gave {direct}"
        )));
    }
    Ok(formula)
}

pub fn custom_extension_report(
    shape: &FieldShape,
    profile: &BreakProfile,
) -> Result<RamificationReport> {
    profile.validate(shape)?;
    report_from_steps(shape.p(), profile.has_unramified_part, &profile.steps)
}

/// Report for the maximal exponent-p kummerian extension `M|K`, with the
/// different cross-checked against `(1+p e1) p q^e - b_(e+1) - 1`.
pub fn maximal_extension_report(shape: &FieldShape) -> Result<RamificationReport> {
    let report = custom_extension_report(shape, &maximal_profile(shape))?;
    let formula_lower = lower_breaks(shape);
    if report.positive_lower_breaks() != formula_lower.as_slice() {
        return Err(Error::Inconsistent(format!(
            "psi lower breaks {:?} differ from closed form {:?}",
            report.positive_lower_breaks(),
            formula_lower
        )));
    }
    let p = BigInt::from(shape.p());
    let qe = num_traits::pow(shape.q(), shape.e() as usize);
    let last = formula_lower.last().cloned().unwrap_or_default();
    let closed = BigInt::from(1 + shape.top()) * &p * qe - last - 1;
    if closed != report.different_valuation {
        return Err(Error::Inconsistent(format!(
            "closed-form different {closed} vs {}",
            report.different_valuation
        )));
    }
    Ok(report)
}

/// Maximal exponent-p abelian extension `N|F` of a field without
/// primitive p-th roots of unity, with absolute ramification index `e`
/// (no divisibility by `p-1` is assumed).
pub fn nonkummerian_maximal_report(p: u64, e: u64, f: u32) -> Result<RamificationReport> {
    if p == 2 {
        return Err(Error::Unsupported(
            "every 2-adic field contains -1; use the maximal kummerian report".into(),
        ));
    }
    if !crate::numth::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 || f == 0 {
        return Err(Error::InvalidShape("e and f must be at least 1".into()));
    }
    let steps: Vec<BreakStep> = (1..=e)
        .map(|i| BreakStep::new(nth_coprime(i, p), f))
        .collect();
    let report = report_from_steps(p, true, &steps)?;

    let q = big_pow(p, f as u64);
    let qe = num_traits::pow(q.clone(), e as usize);
    let top = nth_coprime(e, p);
    let closed = BigInt::from(1 + top) * qe - (lower_break_formula(p, &q, e) + 1);
    if closed != report.different_valuation {
        return Err(Error::Inconsistent(format!(
            "closed-form different {closed} vs {}",
            report.different_valuation
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalMode {
    Min,
    Max,
}

const EXTREMAL_SEARCH_LIMIT: u128 = 2_000_000;

/// Extremal discriminant valuation among totally ramified elementary
/// abelian extensions of degree `p^m`, by exhaustive search over admissible
/// profiles. Ties keep the first witness in lexicographic break order.
pub fn extremal_discriminant(
    shape: &FieldShape,
    m: u64,
    mode: ExtremalMode,
) -> Result<(BigInt, BreakProfile)> {
    let e = shape.e();
    let f = shape.f() as u64;
    let max_m = f * e + 1;
    if m == 0 || m > max_m {
        return Err(Error::OutOfRange(format!(
            "degree exponent {m} outside [1, {max_m}]"
        )));
    }
    let mut candidates: Vec<(u64, u64)> = (1..=e).map(|i| (nth_coprime(i, shape.p()), f)).collect();
    candidates.push((shape.top(), 1));

    // count profiles first: ways[k][s] = #choices among candidates[k..] with dim sum s
    let n = candidates.len();
    let mut ways = vec![vec![0u128; m as usize + 1]; n + 1];
    ways[n][0] = 1;
    for k in (0..n).rev() {
        for s in 0..=m as usize {
            let mut total = ways[k + 1][s];
            for d in 1..=candidates[k].1.min(s as u64) as usize {
                total = total.saturating_add(ways[k + 1][s - d]);
            }
            ways[k][s] = total;
        }
    }
    if ways[0][m as usize] > EXTREMAL_SEARCH_LIMIT {
        return Err(Error::Guard(format!(
            "{} profiles exceed the search limit {EXTREMAL_SEARCH_LIMIT}",
            ways[0][m as usize]
        )));
    }

    let mut best: Option<(BigInt, Vec<BreakStep>)> = None;
    let mut current = Vec::new();
    search(shape.p(), &candidates, 0, m, &mut current, mode, &mut best)?;
    let (value, steps) =
        best.ok_or_else(|| Error::OutOfRange(format!("no profile of dimension {m}")))?;
    Ok((value, BreakProfile::totally_ramified(steps)))
}

fn search(
    p: u64,
    candidates: &[(u64, u64)],
    k: usize,
    remaining: u64,
    current: &mut Vec<BreakStep>,
    mode: ExtremalMode,
    best: &mut Option<(BigInt, Vec<BreakStep>)>,
) -> Result<()> {
    if remaining == 0 {
        let value = herbrand_different(p, current)?;
        let better = match best {
            None => true,
            Some((b, _)) => match mode {
                ExtremalMode::Max => value > *b,
                ExtremalMode::Min => value < *b,
            },
        };
        if better {
            *best = Some((value, current.clone()));
        }
        return Ok(());
    }
    if k == candidates.len() {
        return Ok(());
    }
    let (u, max_dim) = candidates[k];
    for d in 1..=max_dim.min(remaining) {
        current.push(BreakStep::new(u, d as u32));
        search(p, candidates, k + 1, remaining - d, current, mode, best)?;
        current.pop();
    }
    search(p, candidates, k + 1, remaining, current, mode, best)
}
