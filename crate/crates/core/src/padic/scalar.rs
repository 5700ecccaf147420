use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PadicError, Result};
use crate::scalar::{int_valuation, mod_inverse, rational_mod};

thread_local! {
    // few primes are live at once, so a linear scan beats hashing
    static POWERS: RefCell<Vec<(u64, Vec<BigInt>)>> = const { RefCell::new(Vec::new()) };
}

/// `p^e`, memoized per thread.
pub(crate) fn pow_p(p: u64, e: u32) -> BigInt {
    POWERS.with(|cell| {
        let mut tables = cell.borrow_mut();
        let i = match tables.iter().position(|(q, _)| *q == p) {
            Some(i) => i,
            None => {
                tables.push((p, vec![BigInt::one()]));
                tables.len() - 1
            }
        };
        let table = &mut tables[i].1;
        while table.len() <= e as usize {
            let next = table.last().unwrap() * p;
            table.push(next);
        }
        table[e as usize].clone()
    })
}

/// Valuation of a residue known to finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// The residue vanishes; the true valuation is at least the precision.
    AtLeast(u32),
}

impl Valuation {
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

/// An element of `Z_p` known modulo `p^precision`.
#[derive(Clone)]
pub struct PadicScalar {
    prime: u64,
    precision: u32,
    residue: BigInt,
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.prime, self.precision)
    }
}

impl PadicScalar {
    pub fn new(prime: u64, precision: u32, value: &BigInt) -> Self {
        let residue = value.mod_floor(&pow_p(prime, precision));
        Self { prime, precision, residue }
    }

    pub fn from_i64(prime: u64, precision: u32, value: i64) -> Self {
        Self::new(prime, precision, &BigInt::from(value))
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        Self { prime, precision, residue: BigInt::zero() }
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        Self::from_i64(prime, precision, 1)
    }

    /// Embeds a rational whose denominator is prime to `p`.
    pub fn from_rational(prime: u64, precision: u32, q: &BigRational) -> Result<Self> {
        let residue = rational_mod(q, &pow_p(prime, precision)).ok_or(PadicError::NotIntegral)?;
        Ok(Self { prime, precision, residue })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Canonical residue in `[0, p^precision)`.
    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    /// Residue in the balanced range `(-p^m/2, p^m/2]`.
    pub fn balanced_residue(&self) -> BigInt {
        let modulus = pow_p(self.prime, self.precision);
        if &self.residue * 2 > modulus {
            &self.residue - modulus
        } else {
            self.residue.clone()
        }
    }

    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            Valuation::AtLeast(self.precision)
        } else {
            Valuation::Finite(int_valuation(&self.residue, self.prime))
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.residue.is_zero()
    }

    /// Forgets digits beyond `precision`; never raises precision.
    pub fn truncate(&self, precision: u32) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        Self::new(self.prime, precision, &self.residue)
    }

    /// Exact division by `p^j`; the value must have valuation at least `j`
    /// (or be unknown at that depth). Loses `j` digits of absolute precision.
    pub fn div_p_pow(&self, j: u32) -> Self {
        if j == 0 {
            return self.clone();
        }
        if self.precision <= j {
            return Self::zero(self.prime, 0);
        }
        let (q, r) = self.residue.div_rem(&pow_p(self.prime, j));
        debug_assert!(r.is_zero(), "division by p^{j} of a value with smaller valuation");
        Self { prime: self.prime, precision: self.precision - j, residue: q }
    }

    /// Multiplication by `p^j`; gains `j` digits of absolute precision.
    pub fn mul_p_pow(&self, j: u32) -> Self {
        Self {
            prime: self.prime,
            precision: self.precision + j,
            residue: &self.residue * pow_p(self.prime, j),
        }
    }

    /// Division by a positive integer `k`, splitting off its `p`-part.
    pub fn div_int(&self, k: u64) -> Self {
        assert!(k > 0);
        let big = BigInt::from(k);
        let j = int_valuation(&big, self.prime);
        let unit = big / pow_p(self.prime, j);
        let shifted = self.div_p_pow(j);
        let modulus = pow_p(self.prime, shifted.precision);
        let inv = mod_inverse(&unit, &modulus).expect("unit part is invertible");
        Self::new(self.prime, shifted.precision, &(shifted.residue * inv))
    }

    /// Multiplication by an exact integer; precision is unchanged.
    pub fn mul_int(&self, k: i64) -> Self {
        Self::new(self.prime, self.precision, &(&self.residue * k))
    }

    /// Equality modulo the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let prec = self.precision.min(other.precision);
        let modulus = pow_p(self.prime, prec);
        (&self.residue - &other.residue).mod_floor(&modulus).is_zero()
    }

    /// Whether an exact rational is congruent to this value to its precision.
    pub fn agrees_with_rational(&self, q: &BigRational) -> bool {
        match Self::from_rational(self.prime, self.precision, q) {
            Ok(v) => v.residue == self.residue,
            Err(_) => false,
        }
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "mixing p-adic values of different primes");
    }
}

impl Add for &PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: &PadicScalar) -> PadicScalar {
        self.same_prime(rhs);
        PadicScalar::new(self.prime, self.precision.min(rhs.precision), &(&self.residue + &rhs.residue))
    }
}

impl Sub for &PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: &PadicScalar) -> PadicScalar {
        self.same_prime(rhs);
        PadicScalar::new(self.prime, self.precision.min(rhs.precision), &(&self.residue - &rhs.residue))
    }
}

impl Mul for &PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &PadicScalar) -> PadicScalar {
        self.same_prime(rhs);
        let va = self.valuation().lower_bound();
        let vb = rhs.valuation().lower_bound();
        let precision = (self.precision + vb).min(rhs.precision + va);
        PadicScalar::new(self.prime, precision, &(&self.residue * &rhs.residue))
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        PadicScalar::new(self.prime, self.precision, &(-&self.residue))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: PadicScalar) -> PadicScalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        -&self
    }
}
