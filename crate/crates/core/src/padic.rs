//! Truncated arithmetic in `Z_p` and in `Z_p[xi]` for a primitive `p^m`-th
//! root of unity `xi`, with norms computed as determinants of
//! multiplication matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numth::{checked_pow_u128, is_prime};

/// Largest allowed `p^N`, so that products of residues fit in `u128`.
const MODULUS_LIMIT: u128 = 1 << 62;
/// Largest `phi(p^m)` accepted by the norm checks.
pub const MAX_NORM_DEGREE: usize = 16;

fn modulus(p: u64, n: u32) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match checked_pow_u128(p as u128, n) {
        Some(q) if q < MODULUS_LIMIT => Ok(q),
        _ => Err(Error::Guard(format!(
            "{p}^{n} exceeds the working-precision limit 2^62"
        ))),
    }
}

/// Inverse of a unit modulo `modulus`.
fn inv_mod(a: u128, modulus: u128) -> u128 {
    let (mut r0, mut r1) = (modulus as i128, (a % modulus) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "not a unit");
    t0.rem_euclid(modulus as i128) as u128
}

/// Element of `Z / p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    n: u32,
    residue: u128,
}

impl PadicInt {
    pub fn new(p: u64, n: u32, value: u128) -> Result<Self> {
        let q = modulus(p, n)?;
        Ok(PadicInt {
            p,
            n,
            residue: value % q,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn residue(&self) -> u128 {
        self.residue
    }

    pub fn modulus(&self) -> u128 {
        (self.p as u128).pow(self.n)
    }

    /// `v_p`, or `None` when the residue is 0 modulo `p^N`.
    pub fn valuation(&self) -> Option<u32> {
        if self.residue == 0 {
            return None;
        }
        let mut r = self.residue;
        let mut v = 0;
        while r.is_multiple_of(self.p as u128) {
            r /= self.p as u128;
            v += 1;
        }
        Some(v)
    }

    /// Membership in `V_k = 1 + p^k Z_p`, for `k <= N`.
    pub fn in_v(&self, k: u32) -> bool {
        let pk = (self.p as u128).pow(k.min(self.n));
        self.residue % pk == 1 % pk
    }

    /// Residue modulo `p^k` for `k <= N`.
    pub fn reduce(&self, k: u32) -> u128 {
        self.residue % (self.p as u128).pow(k.min(self.n))
    }

    pub fn mul(&self, other: &Self) -> Self {
        PadicInt {
            residue: self.residue * other.residue % self.modulus(),
            ..*self
        }
    }
}

/// `Phi_{p^m}(T) = sum_{j<p} T^(j p^(m-1))`, coefficients low to high.
pub fn cyclo_modulus(p: u64, m: u32) -> Vec<u64> {
    let step = p.pow(m - 1) as usize;
    let mut c = vec![0u64; (p as usize - 1) * step + 1];
    for j in 0..p as usize {
        c[j * step] = 1;
    }
    c
}

/// `sum c_i xi^i` with `i < phi(p^m)` and coefficients modulo `p^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicElem {
    p: u64,
    m: u32,
    n: u32,
    coeffs: Vec<u128>,
}

impl CyclotomicElem {
    /// Reduces an arbitrary polynomial in `xi` modulo `Phi_{p^m}` and `p^N`.
    pub fn from_poly(p: u64, m: u32, n: u32, poly: &[i128]) -> Result<Self> {
        let q = modulus(p, n)?;
        if m == 0 {
            return Err(Error::OutOfRange("m must be at least 1".into()));
        }
        let deg = phi_degree(p, m)?;
        let mut c: Vec<u128> = poly
            .iter()
            .map(|&x| x.rem_euclid(q as i128) as u128)
            .collect();
        if c.len() < deg {
            c.resize(deg, 0);
        }
        let mut e = CyclotomicElem { p, m, n, coeffs: c };
        e.reduce();
        Ok(e)
    }

    pub fn constant(p: u64, m: u32, n: u32, c: i128) -> Result<Self> {
        Self::from_poly(p, m, n, &[c])
    }

    pub fn one(p: u64, m: u32, n: u32) -> Result<Self> {
        Self::constant(p, m, n, 1)
    }

    /// The root of unity `xi`.
    pub fn xi(p: u64, m: u32, n: u32) -> Result<Self> {
        Self::from_poly(p, m, n, &[0, 1])
    }

    /// The uniformiser `1 - xi`.
    pub fn one_minus_xi(p: u64, m: u32, n: u32) -> Result<Self> {
        Self::from_poly(p, m, n, &[1, -1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    /// `phi(p^m)`.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    fn modulus(&self) -> u128 {
        (self.p as u128).pow(self.n)
    }

    /// Folds degrees `>= phi(p^m)` using `T^phi = -sum_{j<p-1} T^(j p^(m-1))`.
    fn reduce(&mut self) {
        let q = self.modulus();
        let step = self.p.pow(self.m - 1) as usize;
        let deg = (self.p as usize - 1) * step;
        for c in self.coeffs.iter_mut() {
            *c %= q;
        }
        while self.coeffs.len() > deg {
            let top = self.coeffs.len() - 1;
            let lead = self.coeffs.pop().unwrap_or(0);
            if lead == 0 {
                continue;
            }
            let base = top - deg;
            for j in 0..self.p as usize - 1 {
                let slot = &mut self.coeffs[base + j * step];
                *slot = (*slot + q - lead) % q;
            }
        }
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.p == other.p && self.m == other.m && self.n == other.n,
            "cyclotomic elements from different rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let q = self.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % q)
            .collect();
        CyclotomicElem {
            coeffs,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        let q = self.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + q - b) % q)
            .collect();
        CyclotomicElem {
            coeffs,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let q = self.modulus();
        let d = self.degree();
        let mut prod = vec![0u128; 2 * d - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b % q) % q;
            }
        }
        let mut out = CyclotomicElem {
            coeffs: prod,
            ..self.clone()
        };
        out.reduce();
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CyclotomicElem {
            coeffs: vec![0; self.degree()],
            ..self.clone()
        };
        acc.coeffs[0] = 1 % self.modulus();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Matrix of multiplication by `self` in the basis `1, xi, xi^2, ...`;
    /// column `j` holds the coordinates of `self * xi^j`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<u128>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut current = self.clone();
        let xi = CyclotomicElem {
            coeffs: {
                let mut v = vec![0; d];
                if d > 1 {
                    v[1] = 1;
                } else {
                    // phi = 1 only for p = 2, m = 1, where xi = -1
                    v[0] = self.modulus() - 1;
                }
                v
            },
            ..self.clone()
        };
        for _ in 0..d {
            cols.push(current.coeffs.clone());
            current = current.mul(&xi);
        }
        (0..d)
            .map(|r| (0..d).map(|c| cols[c][r]).collect())
            .collect()
    }
}

fn phi_degree(p: u64, m: u32) -> Result<usize> {
    p.checked_pow(m - 1)
        .and_then(|s| s.checked_mul(p - 1))
        .filter(|&d| d <= 1 << 16)
        .map(|d| d as usize)
        .ok_or_else(|| Error::Guard(format!("phi({p}^{m}) is too large")))
}

/// `N_{K|Q_p}(x)` modulo `p^N`, as the determinant of multiplication by `x`.
///
/// Elimination uses unit pivots; when a column of the trailing block has
/// none, every entry is divisible by `p` and one factor `p` is pulled out
/// of that column. Each such division loses one digit of that column but
/// the extracted `p` restores it, so the result is exact modulo `p^N`.
pub fn absolute_norm(x: &CyclotomicElem) -> PadicInt {
    let p = x.p as u128;
    let q = x.modulus();
    let mut a = x.multiplication_matrix();
    let d = a.len();
    let mut det: u128 = 1;
    let mut extracted: u32 = 0;
    let zero = PadicInt {
        p: x.p,
        n: x.n,
        residue: 0,
    };
    let mut c = 0;
    while c < d {
        if a[c..].iter().all(|row| row[c] == 0) {
            return zero;
        }
        let Some(r) = (c..d).find(|&r| !a[r][c].is_multiple_of(p)) else {
            for row in a[c..].iter_mut() {
                row[c] /= p;
            }
            extracted += 1;
            if extracted >= x.n {
                return zero;
            }
            continue;
        };
        if r != c {
            a.swap(r, c);
            det = (q - det) % q;
        }
        let pivot = a[c][c];
        det = det * pivot % q;
        let inv = inv_mod(pivot, q);
        for i in c + 1..d {
            let factor = a[i][c] * inv % q;
            if factor == 0 {
                continue;
            }
            let (top, rest) = a.split_at_mut(i);
            for (x, &y) in rest[0][c..d].iter_mut().zip(&top[c][c..d]) {
                *x = (*x + q - factor * y % q) % q;
            }
        }
        c += 1;
    }
    let scale = p.pow(extracted);
    PadicInt {
        p: x.p,
        n: x.n,
        residue: det * scale % q,
    }
}

/// Outcome of dividing by `1 - xi` while possible.
enum PiDivision {
    /// Exact valuation.
    Unit(u64),
    /// Divisible at least this many times; precision ran out.
    AtLeast(u64),
}

fn divide_out_pi(x: &CyclotomicElem, stop_at: Option<u64>) -> Result<PiDivision> {
    let p = x.p as u128;
    let q = x.modulus();
    let d = x.degree();
    // S(T) = (p - Phi(T)) / (1 - T), so that p = (1 - xi) S(xi)
    let phi = cyclo_modulus(x.p, x.m);
    let mut s = vec![0i128; phi.len() - 1];
    {
        // (p - Phi)(T) = (1 - T) S(T): S_0 = p - Phi_0, S_k = S_{k-1} - Phi_k
        let mut acc = p as i128 - phi[0] as i128;
        for (k, slot) in s.iter_mut().enumerate() {
            *slot = acc;
            acc -= phi[k + 1] as i128;
        }
    }
    let s_elem = CyclotomicElem::from_poly(x.p, x.m, x.n, &s)?;

    let mut current = x.clone();
    // x is known modulo p^N = pi^(N phi) * unit
    let mut pi_precision = x.n as u64 * d as u64;
    let mut v = 0u64;
    loop {
        if Some(v) == stop_at {
            return Ok(PiDivision::AtLeast(v));
        }
        if pi_precision == 0 || current.is_zero() {
            return Ok(PiDivision::AtLeast(v));
        }
        let at_one: u128 = current.coeffs.iter().sum();
        if !at_one.is_multiple_of(p) {
            return Ok(PiDivision::Unit(v));
        }
        // x(T) = (1 - T) Q(T) + x(1), Q_k = -(x_{k+1} + ... + x_{d-1})
        let mut quotient = vec![0i128; d];
        let mut tail: i128 = 0;
        for k in (0..d).rev() {
            quotient[k] = -tail;
            tail += current.coeffs[k] as i128;
        }
        let qpoly = CyclotomicElem::from_poly(x.p, x.m, x.n, &quotient)?;
        let t = (at_one / p) % q;
        let scaled = CyclotomicElem::from_poly(x.p, x.m, x.n, &[t as i128])?.mul(&s_elem);
        current = qpoly.add(&scaled);
        v += 1;
        pi_precision -= 1;
    }
}

/// Valuation with respect to `1 - xi`; errors when `x` cannot be told
/// apart from 0 at the working precision.
pub fn val_pi(x: &CyclotomicElem) -> Result<u64> {
    match divide_out_pi(x, None)? {
        PiDivision::Unit(v) => Ok(v),
        PiDivision::AtLeast(v) => Err(Error::Precision(format!(
            "element is divisible by (1 - xi)^{v} at precision p^{}; raise the precision",
            x.n
        ))),
    }
}

/// True when `(1 - xi)^k` divides `x`, for `k` up to `N phi(p^m)`.
pub fn divisible_by_pi_power(x: &CyclotomicElem, k: u64) -> Result<bool> {
    if k > x.n as u64 * x.degree() as u64 {
        return Err(Error::Precision(format!(
            "cannot test divisibility by (1 - xi)^{k}"
        )));
    }
    Ok(match divide_out_pi(x, Some(k))? {
        PiDivision::Unit(v) => v >= k,
        PiDivision::AtLeast(_) => true,
    })
}

fn random_elem<R: Rng>(p: u64, m: u32, n: u32, rng: &mut R) -> Result<CyclotomicElem> {
    let q = modulus(p, n)?;
    let d = phi_degree(p, m)?;
    let coeffs: Vec<i128> = (0..d).map(|_| rng.random_range(0..q) as i128).collect();
    CyclotomicElem::from_poly(p, m, n, &coeffs)
}

/// Random unit: `x(1)` is made prime to `p` by adjusting the constant term.
fn random_unit<R: Rng>(p: u64, m: u32, n: u32, rng: &mut R) -> Result<CyclotomicElem> {
    let mut g = random_elem(p, m, n, rng)?;
    let at_one: u128 = g.coeffs.iter().sum();
    if at_one.is_multiple_of(p as u128) {
        let shift = rng.random_range(1..p) as u128;
        g.coeffs[0] = (g.coeffs[0] + shift) % g.modulus();
    }
    Ok(g)
}

/// `alpha = beta * gamma^p` with `beta = 1 + (1 - xi)^(p^m) u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPrimaryUnit {
    pub alpha: CyclotomicElem,
    pub beta: CyclotomicElem,
    pub gamma: CyclotomicElem,
}

fn check_norm_params(p: u64, m: u32, n: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    modulus(p, n)?;
    let d = phi_degree(p, m)?;
    if d > MAX_NORM_DEGREE {
        return Err(Error::Guard(format!(
            "phi({p}^{m}) = {d} exceeds the determinant limit {MAX_NORM_DEGREE}"
        )));
    }
    if n < m + 2 {
        return Err(Error::Precision(format!(
            "precision {n} must be at least m + 2 = {}",
            m + 2
        )));
    }
    Ok(())
}

fn sample_p_primary<R: Rng>(p: u64, m: u32, n: u32, rng: &mut R) -> Result<PPrimaryUnit> {
    let u = random_elem(p, m, n, rng)?;
    let gamma = random_unit(p, m, n, rng)?;
    let pi = CyclotomicElem::one_minus_xi(p, m, n)?;
    let one = CyclotomicElem::one(p, m, n)?;
    let beta = one.add(&pi.pow(p.pow(m)).mul(&u));
    let alpha = beta.mul(&gamma.pow(p));
    Ok(PPrimaryUnit { alpha, beta, gamma })
}

/// A p-primary unit of `Q_p(xi_{p^m})`, deterministic in `seed`.
pub fn random_p_primary_unit(p: u64, m: u32, n: u32, seed: u64) -> Result<PPrimaryUnit> {
    check_norm_params(p, m, n)?;
    sample_p_primary(p, m, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCheckReport {
    pub p: u64,
    pub m: u32,
    pub precision: u32,
    pub trials: usize,
    pub passed: usize,
    /// The congruence being tested is `norm = 1 (mod p^exponent)`.
    pub exponent: u32,
    /// Observed norms modulo `p^(exponent + 1)`.
    pub residues: Vec<u128>,
}

impl NormCheckReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

/// Samples p-primary units `alpha` and checks `N(alpha) = 1 (mod p^(m+1))`.
pub fn pisolkar_check(p: u64, m: u32, trials: usize, n: u32, seed: u64) -> Result<NormCheckReport> {
    check_norm_params(p, m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = empty_report(p, m, n, trials, m + 1);
    for _ in 0..trials {
        let unit = sample_p_primary(p, m, n, &mut rng)?;
        record(&mut report, absolute_norm(&unit.alpha));
    }
    Ok(report)
}

/// Samples units `gamma` and checks `N(gamma) = 1 (mod p^m)`, and
/// `N(gamma^p) = 1 (mod p^(m+1))` in the second report.
pub fn unit_norm_level_check(
    p: u64,
    m: u32,
    trials: usize,
    n: u32,
    seed: u64,
) -> Result<(NormCheckReport, NormCheckReport)> {
    check_norm_params(p, m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut units = empty_report(p, m, n, trials, m);
    let mut powers = empty_report(p, m, n, trials, m + 1);
    for _ in 0..trials {
        let gamma = random_unit(p, m, n, &mut rng)?;
        record(&mut units, absolute_norm(&gamma));
        record(&mut powers, absolute_norm(&gamma.pow(p)));
    }
    Ok((units, powers))
}

fn empty_report(p: u64, m: u32, n: u32, trials: usize, exponent: u32) -> NormCheckReport {
    NormCheckReport {
        p,
        m,
        precision: n,
        trials,
        passed: 0,
        exponent,
        residues: Vec::with_capacity(trials),
    }
}

fn record(report: &mut NormCheckReport, norm: PadicInt) {
    if norm.in_v(report.exponent) {
        report.passed += 1;
    }
    report.residues.push(norm.reduce(report.exponent + 1));
}
