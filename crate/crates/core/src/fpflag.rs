//! Linear algebra over `F_p`: ranks, reduced echelon forms, exhaustive
//! enumeration of subspaces and counts of subspaces meeting a coordinate
//! flag in prescribed dimensions.

use crate::breakcalc::{dim_bar_u, FieldShape};
use crate::error::{Error, Result};
use crate::numth::{inv_mod_prime, is_prime};

/// Dense matrix over `F_p`, row-major, entries in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of equal length, reducing entries mod `p`.
    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut m = Self::zeros(p, 0, cols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::InvalidShape(format!(
                "row of length {} in a matrix with {} columns",
                row.len(),
                self.cols
            )));
        }
        self.data.extend(row.iter().map(|&x| x % self.p));
        self.rows += 1;
        Ok(())
    }

    /// Keeps only the columns in `range`.
    pub fn column_slice(&self, range: std::ops::Range<usize>) -> FpMatrix {
        let cols = range.len();
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[range.clone()]);
        }
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols,
            data,
        }
    }

    /// Reduced row echelon form with zero rows removed, and the pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = inv_mod_prime(m.get(r, c), p);
            for j in c..m.cols {
                let v = m.get(r, j) * inv % p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = (m.get(i, j) + (p - factor) * m.get(r, j)) % p;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// `F_p^D` with a nested chain of coordinate subspaces; member `j` is the
/// span of the first `chain[j]` basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSpace {
    p: u64,
    ambient: usize,
    chain: Vec<usize>,
}

const ENUMERATION_LIMIT: u64 = 1 << 20;

impl FlagSpace {
    pub fn new(p: u64, ambient: usize, chain: Vec<usize>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if chain.windows(2).any(|w| w[0] > w[1]) || chain.iter().any(|&d| d > ambient) {
            return Err(Error::InvalidShape(format!(
                "chain {chain:?} is not weakly increasing inside dimension {ambient}"
            )));
        }
        Ok(FlagSpace { p, ambient, chain })
    }

    /// The image of the unit filtration in `K^x / K^xp`: member `j` is
    /// `bar U_{p e1 - j}`, so that lines new at member `j` are exactly the
    /// degree-p extensions with upper break `j` (`j = 0` is unramified).
    pub fn for_shape(shape: &FieldShape) -> Result<Self> {
        let top = shape.top() as i64;
        let chain = (0..=top)
            .map(|j| dim_bar_u(shape, top - j) as usize)
            .collect();
        Self::new(shape.p(), shape.kummer_dimension() as usize, chain)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    fn guard(&self) -> Result<()> {
        let size = crate::numth::checked_pow_u128(self.p as u128, self.ambient as u32);
        match size {
            Some(s) if s <= ENUMERATION_LIMIT as u128 => Ok(()),
            _ => Err(Error::Guard(format!(
                "p^D = {}^{} exceeds the enumeration limit 2^20",
                self.p, self.ambient
            ))),
        }
    }
}

/// Iterator over all `dim`-dimensional subspaces of `F_p^D`, each given by
/// its unique reduced row echelon basis.
#[derive(Debug, Clone)]
pub struct Subspaces {
    p: u64,
    ambient: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u64>,
    done: bool,
}

impl Subspaces {
    fn free_positions(pivots: &[usize], ambient: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, &c) in pivots.iter().enumerate() {
            for j in c + 1..ambient {
                if !pivots.contains(&j) {
                    out.push((r, j));
                }
            }
        }
        out
    }

    fn reset_digits(&mut self) {
        self.free = Self::free_positions(&self.pivots, self.ambient);
        self.digits = vec![0; self.free.len()];
    }

    fn current(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.p, self.pivots.len(), self.ambient);
        for (r, &c) in self.pivots.iter().enumerate() {
            m.set(r, c, 1);
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            m.set(r, c, d);
        }
        m
    }

    /// Advances the pivot combination; false when exhausted.
    fn next_pivots(&mut self) -> bool {
        let k = self.pivots.len();
        let n = self.ambient;
        let Some(i) = (0..k).rev().find(|&i| self.pivots[i] < n - k + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..k {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }

    fn advance(&mut self) {
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.p {
                return;
            }
            *d = 0;
        }
        if self.next_pivots() {
            self.reset_digits();
        } else {
            self.done = true;
        }
    }
}

impl Iterator for Subspaces {
    type Item = FpMatrix;

    fn next(&mut self) -> Option<FpMatrix> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

pub fn enumerate_subspaces(space: &FlagSpace, dim: usize) -> Result<Subspaces> {
    space.guard()?;
    if dim > space.ambient {
        return Err(Error::OutOfRange(format!(
            "no {dim}-dimensional subspaces of F_p^{}",
            space.ambient
        )));
    }
    let mut it = Subspaces {
        p: space.p,
        ambient: space.ambient,
        pivots: (0..dim).collect(),
        free: Vec::new(),
        digits: Vec::new(),
        done: false,
    };
    it.reset_digits();
    Ok(it)
}

/// `dim(D ∩ span(e_1..e_d))` for a subspace `D` given by a basis.
pub fn intersection_with_prefix(basis: &FpMatrix, d: usize) -> usize {
    let dim = basis.rank();
    if d >= basis.cols() {
        return dim;
    }
    dim - basis.column_slice(d..basis.cols()).rank()
}

/// Lines contained in chain member `level` but not in member `level - 1`.
pub fn count_lines_at_level(space: &FlagSpace, level: usize) -> Result<u64> {
    let Some(&hi) = space.chain.get(level) else {
        return Err(Error::OutOfRange(format!(
            "level {level} outside a chain of length {}",
            space.chain.len()
        )));
    };
    let lo = if level == 0 {
        0
    } else {
        space.chain[level - 1]
    };
    let mut count = 0;
    for line in enumerate_subspaces(space, 1)? {
        let support = (0..space.ambient)
            .rev()
            .find(|&j| line.get(0, j) != 0)
            .unwrap_or(0)
            + 1;
        if support <= hi && support > lo {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of subspaces `D` of the whole space with `dim(D ∩ member_j) =
/// profile[j]` for every `j`. The chain must end at the ambient space, and
/// `dim D` is the last profile entry.
pub fn count_with_profile(space: &FlagSpace, profile: &[usize]) -> Result<u64> {
    if profile.len() != space.chain.len() {
        return Err(Error::InvalidShape(format!(
            "profile of length {} for a chain of length {}",
            profile.len(),
            space.chain.len()
        )));
    }
    if space.chain.last() != Some(&space.ambient) {
        return Err(Error::InvalidShape(
            "chain must end at the ambient space".into(),
        ));
    }
    let dim = *profile.last().unwrap_or(&0);
    let mut count = 0;
    for sub in enumerate_subspaces(space, dim)? {
        if space
            .chain
            .iter()
            .zip(profile)
            .all(|(&d, &want)| intersection_with_prefix(&sub, d) == want)
        {
            count += 1;
        }
    }
    Ok(count)
}

/// Intersection dimensions with `bar U_{p e1 - j}` of the subspace whose
/// extension has the given upper breaks (`j` indexes [`FlagSpace::for_shape`]).
pub fn intersection_profile_for_breaks(
    shape: &FieldShape,
    profile: &crate::breakcalc::BreakProfile,
) -> Vec<usize> {
    (0..=shape.top())
        .map(|j| {
            let ramified: u64 = profile
                .steps
                .iter()
                .filter(|s| s.upper <= j)
                .map(|s| s.dim as u64)
                .sum();
            ramified as usize + usize::from(profile.has_unramified_part)
        })
        .collect()
}

/// Number of `k`-dimensional subspaces of `F_p^n`.
pub fn gaussian_binomial(p: u64, n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= p.pow(n - i) - 1;
        den *= p.pow(i + 1) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breakcalc::{count_single_break, maximal_profile, BreakProfile, BreakStep};
    use num_bigint::BigInt;

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::zeros(5, 3, 4).rank(), 0);
        assert_eq!(FpMatrix::identity(7, 5).rank(), 5);
        let m = FpMatrix::from_rows(2, 3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.row(0), &[1, 0, 1]);
    }

    #[test]
    fn enumeration_counts() {
        let s = FlagSpace::new(2, 3, vec![3]).unwrap();
        assert_eq!(enumerate_subspaces(&s, 0).unwrap().count(), 1);
        assert_eq!(enumerate_subspaces(&s, 1).unwrap().count(), 7);
        let s = FlagSpace::new(3, 2, vec![2]).unwrap();
        assert_eq!(enumerate_subspaces(&s, 1).unwrap().count(), 4);
        for p in [2u64, 3] {
            for n in 0..=4u32 {
                let s = FlagSpace::new(p, n as usize, vec![n as usize]).unwrap();
                for k in 0..=n {
                    let all: Vec<FpMatrix> = enumerate_subspaces(&s, k as usize).unwrap().collect();
                    assert_eq!(all.len() as u128, gaussian_binomial(p, n, k));
                    for b in &all {
                        assert_eq!(b.rank(), k as usize);
                        assert_eq!(&b.rref().0, b);
                    }
                }
            }
        }
    }

    #[test]
    fn guard_rejects_large_spaces() {
        let s = FlagSpace::new(3, 13, vec![13]).unwrap();
        assert!(matches!(enumerate_subspaces(&s, 1), Err(Error::Guard(_))));
        assert!(FlagSpace::new(2, 3, vec![2, 1]).is_err());
    }

    #[test]
    fn lines_per_level() {
        let s = FlagSpace::new(2, 3, vec![1, 2, 3]).unwrap();
        assert_eq!(count_lines_at_level(&s, 1).unwrap(), 2);
        assert_eq!(count_lines_at_level(&s, 2).unwrap(), 4);
        let s = FlagSpace::new(2, 3, vec![1, 1, 3]).unwrap();
        assert_eq!(count_lines_at_level(&s, 1).unwrap(), 0);
    }

    #[test]
    fn lines_match_single_break_counts() {
        for (p, e1, f) in [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1)] {
            let shape = FieldShape::new(p, e1, f).unwrap();
            let space = FlagSpace::for_shape(&shape).unwrap();
            assert_eq!(count_lines_at_level(&space, 0).unwrap(), 1);
            for u in 1..=shape.top() {
                let lines = count_lines_at_level(&space, u as usize).unwrap();
                let expect = count_single_break(&shape, u).unwrap_or_default();
                assert_eq!(BigInt::from(lines), expect, "shape {shape:?} u {u}");
            }
        }
    }

    #[test]
    fn profile_counts() {
        let s = FlagSpace::new(2, 3, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(count_with_profile(&s, &[0, 0, 0, 0]).unwrap(), 1);
        assert_eq!(count_with_profile(&s, &[0, 0, 1, 2]).unwrap(), 4);

        let shape = FieldShape::new(2, 1, 2).unwrap();
        let space = FlagSpace::for_shape(&shape).unwrap();
        let mut full = maximal_profile(&shape);
        full.has_unramified_part = false;
        let prof = intersection_profile_for_breaks(&shape, &full);
        assert_eq!(
            count_with_profile(&space, &prof).unwrap(),
            1 << (1 + shape.e() * 2)
        );

        // single-line profiles agree with line counts
        for u in 1..=shape.top() {
            let single = BreakProfile::totally_ramified(vec![BreakStep::new(u, 1)]);
            let prof = intersection_profile_for_breaks(&shape, &single);
            assert_eq!(
                count_with_profile(&space, &prof).unwrap(),
                count_lines_at_level(&space, u as usize).unwrap()
            );
        }
    }
}
