//! Small integer helpers shared across the engines.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn big_pow(base: u64, exp: u64) -> BigInt {
    let mut acc = BigInt::one();
    let b = BigInt::from(base);
    let mut e = exp;
    let mut sq = b;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// p-adic valuation of a nonzero big integer; `None` for zero.
pub fn big_val_p(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    while (&y % &pb).is_zero() {
        y /= &pb;
        v += 1;
    }
    Some(v)
}

pub fn checked_pow_u128(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Modular exponentiation for moduli below 2^63.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo prime `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    // Lucas would be overkill here; n stays below p in every caller.
    let mut num = 1u128;
    let mut den = 1u128;
    let pm = p as u128;
    for i in 0..k {
        num = num * ((n - i) as u128 % pm) % pm;
        den = den * ((i + 1) as u128 % pm) % pm;
    }
    if den == 0 {
        return 0;
    }
    (num * inv_mod_prime(den as u64, p) as u128 % pm) as u64
}
