//! Exact number-theoretic primitives: cyclotomic values, multiplicative
//! orders, p-parts, and radical-free comparison against the thresholds
//! 2*sqrt(p-1) and 2*(p-1)^(1/4). No floating point anywhere.

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A prime power q = base^exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    pub value: u64,
    pub base: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(value: u64) -> Result<Self> {
        if value < 2 {
            return Err(Error::Domain(format!("{value} is not a prime power")));
        }
        let mut base = value;
        // The base is the smallest prime factor; value must be a pure power of it.
        let mut d = 2u64;
        while d * d <= base {
            if base % d == 0 {
                base = d;
                break;
            }
            d += 1;
        }
        let mut exponent = 0u32;
        let mut rest = value;
        while rest % base == 0 {
            rest /= base;
            exponent += 1;
        }
        if rest != 1 {
            return Err(Error::Domain(format!("{value} is not a prime power")));
        }
        Ok(PrimePower {
            value,
            base,
            exponent,
        })
    }
}

impl std::fmt::Display for PrimePower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Outcome of an exact comparison against a radical threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ThresholdVerdict {
    StrictPass,
    Equality,
    Fail,
}

/// Which root the threshold clears: 2*sqrt(p-1) or 2*(p-1)^(1/4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundExponent {
    Square,
    Fourth,
}

impl BoundExponent {
    pub fn as_u32(self) -> u32 {
        match self {
            BoundExponent::Square => 2,
            BoundExponent::Fourth => 4,
        }
    }

    pub fn from_u32(e: u32) -> Result<Self> {
        match e {
            2 => Ok(BoundExponent::Square),
            4 => Ok(BoundExponent::Fourth),
            other => Err(Error::Domain(format!(
                "threshold exponent must be 2 or 4, got {other}"
            ))),
        }
    }
}

/// Deterministic primality test: trial division below 10^6, then a strong
/// pseudoprime battery with the bases that decide all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 1_000_000 {
        let mut d = 41u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Phi_d(q), by the exact recursion Phi_d(q) = (q^d - 1) / prod_{e|d, e<d} Phi_e(q).
pub fn cyclotomic_value(d: u32, q: u64) -> BigUint {
    assert!(d >= 1 && q >= 2);
    let mut values: Vec<(u32, BigUint)> = Vec::new();
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mut num = BigUint::from(q).pow(e) - BigUint::one();
        for (e2, v) in &values {
            if e % e2 == 0 {
                let (quot, rem) = num.div_rem(v);
                debug_assert!(rem.is_zero());
                num = quot;
            }
        }
        values.push((e, num));
    }
    values.pop().unwrap().1
}

/// Least e >= 1 with q^e = 1 mod p; divides p-1.
pub fn multiplicative_order(q: u64, p: u64) -> Result<u64> {
    if q % p == 0 {
        return Err(Error::Domain(format!("p = {p} divides q = {q}")));
    }
    let mut x = q % p;
    let mut e = 1u64;
    while x != 1 {
        x = mul_mod(x, q % p, p);
        e += 1;
        debug_assert!(e <= p);
    }
    Ok(e)
}

/// The largest power of p dividing m.
pub fn p_part(m: &BigUint, p: u64) -> BigUint {
    let p = BigUint::from(p);
    let mut part = BigUint::one();
    let mut rest = m.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        part *= &p;
        rest = q;
    }
    part
}

/// Exact comparison of k against 2*(p-1)^(1/exp) by clearing the radical:
/// k^2 vs 4(p-1), or k^4 vs 16(p-1).
pub fn compare_to_threshold(k: &BigUint, p: u64, exponent: BoundExponent) -> ThresholdVerdict {
    let pm1 = BigUint::from(p - 1);
    let (lhs, rhs) = match exponent {
        BoundExponent::Square => (k.pow(2), BigUint::from(4u32) * pm1),
        BoundExponent::Fourth => (k.pow(4), BigUint::from(16u32) * pm1),
    };
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => ThresholdVerdict::StrictPass,
        std::cmp::Ordering::Equal => ThresholdVerdict::Equality,
        std::cmp::Ordering::Less => ThresholdVerdict::Fail,
    }
}

/// Exact comparison of the rational a/b (b > 0) against 2*sqrt(p-1)*scale:
/// compares a^2 vs 4(p-1)*(scale*b)^2.
pub fn compare_ratio_to_scaled_threshold(
    num: &BigUint,
    den: &BigUint,
    p: u64,
    scale: &BigUint,
) -> ThresholdVerdict {
    let lhs = num.pow(2);
    let rhs = BigUint::from(4u32) * BigUint::from(p - 1) * (scale * den).pow(2);
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => ThresholdVerdict::StrictPass,
        std::cmp::Ordering::Equal => ThresholdVerdict::Equality,
        std::cmp::Ordering::Less => ThresholdVerdict::Fail,
    }
}

/// Some(m) when p - 1 = m^2, else None.
pub fn is_square_plus_one(p: u64) -> Option<u64> {
    let m = (p - 1).sqrt();
    (m * m == p - 1).then_some(m)
}

/// Decides min_{b>=1} (u*b + c/b) >= 2*sqrt(u*c) against 2*sqrt(p-1): the
/// AM-GM minimum clears the threshold iff u*c compares to p-1 accordingly.
pub fn amgm_extension_holds(u: u64, c: &BigUint, p: u64) -> ThresholdVerdict {
    let prod = BigUint::from(u) * c;
    match prod.cmp(&BigUint::from(p - 1)) {
        std::cmp::Ordering::Greater => ThresholdVerdict::StrictPass,
        std::cmp::Ordering::Equal => ThresholdVerdict::Equality,
        std::cmp::Ordering::Less => ThresholdVerdict::Fail,
    }
}

/// ceil(a/b) in big integers.
pub fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - BigUint::one()) / b
}
