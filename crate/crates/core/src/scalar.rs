//! Scalar abstraction shared by the linear algebra and jet layers.
//!
//! Everything that only needs field operations is written against [`Scalar`],
//! so the same code runs over exact rationals (the default, see
//! [`crate::Rational`]) and over `f32`/`f64` for quick numerical experiments.
//! Rank and membership decisions are only trustworthy over exact fields.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// A field element usable by [`crate::linalg::Matrix`] and [`crate::jets::Jet`].
pub trait Scalar: Num + Clone + Neg<Output = Self> + Debug {
    /// Embeds a machine integer.
    fn from_i64(v: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let neg = v < 0;
        // binary expansion keeps this O(log v) for every field
        let mut bits = v.unsigned_abs();
        let mut pow = one;
        while bits > 0 {
            if bits & 1 == 1 {
                acc = acc + pow.clone();
            }
            pow = pow.clone() + pow;
            bits >>= 1;
        }
        if neg {
            -acc
        } else {
            acc
        }
    }
}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = T> + Debug {}

/// Parses `p/q`, `p`, or a decimal-free integer string into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    // peel off the largest power of p that fits a machine word at a time
    let (mut word, mut digits) = (p, 1u32);
    while let Some(next) = word.checked_mul(p) {
        word = next;
        digits += 1;
    }
    let mut v = 0;
    let mut m = std::borrow::Cow::Borrowed(n);
    loop {
        let mut r = small_rem(&m, word);
        if r != 0 {
            while r.is_multiple_of(p) {
                r /= p;
                v += 1;
            }
            return v;
        }
        v += digits;
        m = std::borrow::Cow::Owned(m.as_ref() / word);
    }
}

/// `|n| mod p` without allocating.
fn small_rem(n: &BigInt, p: u64) -> u64 {
    let p = p as u128;
    n.iter_u64_digits().rev().fold(0u128, |r, d| ((r << 64) | d as u128) % p) as u64
}

/// `p`-adic valuation of a rational, `None` for zero.
pub fn rational_valuation(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

/// True when `p` does not divide the denominator of `q`.
pub fn is_p_integral(q: &BigRational, p: u64) -> bool {
    !(q.denom() % BigInt::from(p)).is_zero()
}

/// Reduces a `p`-integral rational modulo `modulus` (a power of `p`).
pub fn rational_mod(q: &BigRational, modulus: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(&q.denom().mod_floor(modulus), modulus)?;
    Some((q.numer().mod_floor(modulus) * inv).mod_floor(modulus))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() && !(-&g.gcd).is_one() {
        return None;
    }
    let x = if g.gcd.is_negative() { -g.x } else { g.x };
    Some(x.mod_floor(m))
}

/// Converts an exact rational that happens to be a small integer.
pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd primes in increasing order.
pub fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&p| is_odd_prime(p))
}
