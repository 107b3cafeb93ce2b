//! Finite fields `F_q = F_p[x]/(g)` with small `q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numth::is_prime;

/// Element of `F_q` as coefficients `c_0 + c_1 x + ... + c_{f-1} x^{f-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(Vec<u64>);

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Conway polynomials, coefficients low to high.
const CONWAY: &[(u64, u32, &[u64])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
];

/// User-supplied moduli keyed by `(p, f)`, taking precedence over the
/// built-in table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModulusTable {
    entries: BTreeMap<(u64, u32), Vec<u64>>,
}

impl ModulusTable {
    /// Parses `{"p,f": [c0, ..., cf], ...}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, Vec<u64>> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("modulus table: {e}")))?;
        let mut entries = BTreeMap::new();
        for (key, coeffs) in raw {
            let (p, f) = key
                .split_once(',')
                .and_then(|(p, f)| Some((p.trim().parse().ok()?, f.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("modulus table key {key:?} is not \"p,f\"")))?;
            entries.insert((p, f), coeffs);
        }
        Ok(ModulusTable { entries })
    }

    pub fn get(&self, p: u64, f: u32) -> Option<&[u64]> {
        self.entries.get(&(p, f)).map(Vec::as_slice)
    }

    pub fn insert(&mut self, p: u64, f: u32, coeffs: Vec<u64>) {
        self.entries.insert((p, f), coeffs);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    f: u32,
    modulus: Vec<u64>,
    tau0: FqElem,
}

impl FqField {
    /// `F_{p^f}` with the built-in modulus, or the first irreducible monic
    /// polynomial when the table has no entry.
    pub fn new(p: u64, f: u32) -> Result<Arc<Self>> {
        Self::with_table(p, f, &ModulusTable::default())
    }

    pub fn with_table(p: u64, f: u32, table: &ModulusTable) -> Result<Arc<Self>> {
        check_params(p, f)?;
        if let Some(c) = table.get(p, f) {
            return Self::with_modulus(p, c);
        }
        if let Some((_, _, c)) = CONWAY.iter().find(|(pp, ff, _)| *pp == p && *ff == f) {
            return Self::with_modulus(p, c);
        }
        let modulus = first_irreducible(p, f)?;
        Ok(Arc::new(Self::build(p, f, modulus)))
    }

    /// Field defined by an explicit monic modulus `c_0 + ... + c_f x^f`.
    pub fn with_modulus(p: u64, coeffs: &[u64]) -> Result<Arc<Self>> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidShape(
                "modulus must have degree at least 1".into(),
            ));
        }
        let f = (coeffs.len() - 1) as u32;
        check_params(p, f)?;
        let modulus: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
        if modulus[f as usize] != 1 {
            return Err(Error::InvalidShape("modulus must be monic".into()));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::Reducible { p, coeffs: modulus });
        }
        Ok(Arc::new(Self::build(p, f, modulus)))
    }

    fn build(p: u64, f: u32, modulus: Vec<u64>) -> Self {
        let mut field = FqField {
            p,
            f,
            modulus,
            tau0: FqElem(vec![0; f as usize]),
        };
        let tau0 = field
            .elements()
            .find(|x| field.trace(x) == 1)
            .expect("the trace map is onto F_p");
        field.tau0 = tau0;
        field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// `q = p^f`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The first element with trace 1 in lexicographic coefficient order.
    pub fn tau0(&self) -> &FqElem {
        &self.tau0
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.f as usize])
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.f as usize];
        v[0] = c % self.p;
        FqElem(v)
    }

    /// `x^k`, the k-th element of the power basis.
    pub fn basis(&self, k: usize) -> FqElem {
        let mut v = vec![0; self.f as usize];
        v[k] = 1;
        FqElem(v)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.f as usize {
            return Err(Error::InvalidShape(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.f
            )));
        }
        let mut v = vec![0; self.f as usize];
        for (d, &c) in v.iter_mut().zip(coeffs) {
            *d = c % self.p;
        }
        Ok(FqElem(v))
    }

    /// All `q` elements, lexicographic in `(c_0, c_1, ...)`.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        let f = self.f as usize;
        (0..self.order()).map(move |mut n| {
            let mut v = vec![0; f];
            for k in (0..f).rev() {
                v[k] = n % self.p;
                n /= self.p;
            }
            FqElem(v)
        })
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn scale(&self, c: u64, a: &FqElem) -> FqElem {
        let c = c % self.p;
        FqElem(a.0.iter().map(|x| x * c % self.p).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p;
        let f = self.f as usize;
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // x^f = -(c_0 + ... + c_{f-1} x^{f-1})
        for d in (f..prod.len()).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            prod[d] = 0;
            for k in 0..f {
                let sub = lead * self.modulus[k] % p;
                prod[d - f + k] = (prod[d - f + k] + p - sub) % p;
            }
        }
        prod.truncate(f);
        FqElem(prod)
    }

    pub fn pow(&self, a: &FqElem, mut exp: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Frobenius `a -> a^p`.
    pub fn frob(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    /// The unique `b` with `b^p = a`, namely `a^(p^(f-1))`.
    pub fn pth_root(&self, a: &FqElem) -> FqElem {
        let mut b = a.clone();
        for _ in 1..self.f {
            b = self.frob(&b);
        }
        b
    }

    /// `a + a^p + ... + a^(p^(f-1))`, as an integer in `[0, p)`.
    pub fn trace(&self, a: &FqElem) -> u64 {
        let mut acc = self.zero();
        let mut term = a.clone();
        for _ in 0..self.f {
            acc = self.add(&acc, &term);
            term = self.frob(&term);
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0));
        acc.0[0]
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::OutOfRange("zero has no inverse".into()));
        }
        Ok(self.pow(a, self.order() - 2))
    }
}

fn check_params(p: u64, f: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::InvalidShape("f must be at least 1".into()));
    }
    match crate::numth::checked_pow_u128(p as u128, f) {
        Some(q) if q <= 1 << 24 => Ok(()),
        _ => Err(Error::Guard(format!("field of order {p}^{f} is too large"))),
    }
}

/// Remainder of `a` modulo the monic `m` over `F_p`.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap_or(0);
        if lead == 0 {
            continue;
        }
        let off = r.len() - dm;
        for k in 0..dm {
            r[off + k] = (r[off + k] + p - lead * m[k] % p) % p;
        }
    }
    r
}

/// Exhaustive search for a monic factor of degree at most `deg / 2`.
fn is_irreducible(p: u64, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for n in 0..count {
            let mut m = vec![0u64; d + 1];
            let mut t = n;
            for c in m.iter_mut().take(d) {
                *c = t % p;
                t /= p;
            }
            m[d] = 1;
            if poly_rem(p, poly, &m).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, f: u32) -> Result<Vec<u64>> {
    let f = f as usize;
    for n in 0..p.pow(f as u32) {
        let mut poly = vec![0u64; f + 1];
        let mut t = n;
        for c in poly.iter_mut().take(f) {
            *c = t % p;
            t /= p;
        }
        poly[f] = 1;
        if is_irreducible(p, &poly) {
            return Ok(poly);
        }
    }
    Err(Error::Inconsistent(format!(
        "no irreducible polynomial of degree {f} over F_{p}"
    )))
}
