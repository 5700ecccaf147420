use std::cell::RefCell;
use std::collections::BTreeSet;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use super::matrix::{matrix_log, PadicMatrix};
use super::scalar::{PadicScalar, Valuation};
use super::{check_prime, PadicError, Result, MIN_TERMS};
use crate::linalg::dot;
use crate::scalar::rational_valuation;
use crate::QMatrix;

/// Radius, in units of the series variable, searched when completeness over
/// all of `Z` cannot be certified.
pub const DEFAULT_RADIUS: i64 = 1 << 20;

/// Linear lower bound `slope * k + intercept` on `v(c_k)` for every index
/// past the stored coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailBound {
    pub slope: Ratio<i64>,
    pub intercept: Ratio<i64>,
}

impl TailBound {
    pub fn at(&self, k: usize) -> Ratio<i64> {
        self.slope * Ratio::from_integer(k as i64) + self.intercept
    }
}

/// Truncated power series `sum c_k t^k` over `Z_p` with a certified tail.
#[derive(Debug, Clone)]
pub struct PadicSeries {
    prime: u64,
    precision: u32,
    coefficients: Vec<PadicScalar>,
    tail: TailBound,
}

fn ceil_u32(x: Ratio<i64>) -> u32 {
    let c = x.ceil().to_integer();
    c.clamp(0, u32::MAX as i64) as u32
}

impl PadicSeries {
    /// `slope` must be positive so the tail is eventually negligible.
    pub fn new(prime: u64, precision: u32, coefficients: Vec<PadicScalar>, tail: TailBound) -> Self {
        assert!(tail.slope > Ratio::zero(), "tail slope must be positive");
        assert!(!coefficients.is_empty());
        Self { prime, precision, coefficients, tail }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Working precision `m` the series was built for.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coefficients(&self) -> &[PadicScalar] {
        &self.coefficients
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    /// Index of the last stored coefficient.
    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Lower bound on the valuation of every omitted coefficient.
    pub fn tail_min(&self) -> Ratio<i64> {
        self.tail.at(self.coefficients.len())
    }

    /// Value at an integer argument, correct to the tail ceiling.
    pub fn eval(&self, r: i64) -> PadicScalar {
        let mut acc = self.coefficients.last().unwrap().clone();
        for c in self.coefficients.iter().rev().skip(1) {
            acc = &acc.mul_int(r) + c;
        }
        acc.truncate(ceil_u32(self.tail_min()))
    }

    /// `g(t) = f(digit + p t)`.
    pub fn substitute(&self, digit: i64) -> PadicSeries {
        let cap = ceil_u32(self.tail_min());
        let truncated: Vec<PadicScalar> = self.coefficients.iter().map(|c| c.truncate(cap)).collect();
        let n = truncated.len();
        // the shifted a_j depends on c_k for k >= j only
        let mut precision = vec![cap; n];
        let mut running = cap;
        for k in (0..n).rev() {
            running = running.min(truncated[k].precision());
            precision[k] = running;
        }
        let mut a: Vec<BigInt> = truncated.iter().map(|c| c.residue().clone()).collect();
        if digit != 0 {
            // Taylor shift over Z, reduced once at the end: a_j = sum_k c_k C(k, j) digit^(k-j)
            for step in 0..n {
                for k in (step..n - 1).rev() {
                    let carry = &a[k + 1] * digit;
                    a[k] += carry;
                }
            }
        }
        let coefficients = a
            .iter()
            .zip(&precision)
            .enumerate()
            .map(|(j, (x, &prec))| PadicScalar::new(self.prime, prec, x).mul_p_pow(j as u32))
            .collect();
        let tail = TailBound { slope: self.tail.slope + 1, intercept: self.tail.intercept };
        PadicSeries { prime: self.prime, precision: self.precision, coefficients, tail }
    }

    /// `f(t) / t` for a series known to vanish at `0`.
    pub fn deflate(&self) -> PadicSeries {
        let mut coefficients: Vec<PadicScalar> = self.coefficients[1..].to_vec();
        if coefficients.is_empty() {
            coefficients.push(PadicScalar::zero(self.prime, ceil_u32(self.tail_min())));
        }
        let tail = TailBound { slope: self.tail.slope, intercept: self.tail.slope + self.tail.intercept };
        PadicSeries { prime: self.prime, precision: self.precision, coefficients, tail }
    }
}

/// Strassmann bound on the number of zeros in `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrassmannBound {
    Finite(usize),
    /// Every coefficient vanishes to working precision.
    IdenticallyZero,
}

/// Largest index attaining the minimal coefficient valuation, provided no
/// imprecise coefficient or the tail could tie or undercut it.
pub fn strassmann_bound(series: &PadicSeries) -> Result<StrassmannBound> {
    let vals: Vec<Valuation> = series.coefficients.iter().map(PadicScalar::valuation).collect();
    let tail_min = series.tail_min();
    let finite = vals.iter().enumerate().filter_map(|(k, v)| match v {
        Valuation::Finite(x) => Some((k, *x)),
        Valuation::AtLeast(_) => None,
    });
    let Some(vmin) = finite.clone().map(|(_, v)| v).min() else {
        let m = series.precision;
        let all_vanish = vals.iter().all(|v| v.lower_bound() >= m);
        if all_vanish && tail_min >= Ratio::from_integer(m as i64) {
            return Ok(StrassmannBound::IdenticallyZero);
        }
        return Err(PadicError::InsufficientPrecision);
    };
    let index = finite.filter(|&(_, v)| v == vmin).map(|(k, _)| k).max().unwrap();
    let undercut = vals.iter().enumerate().any(|(k, v)| match v {
        Valuation::AtLeast(a) => *a < vmin || (*a == vmin && k > index),
        Valuation::Finite(_) => false,
    });
    if undercut || tail_min <= Ratio::from_integer(vmin as i64) {
        return Err(PadicError::InsufficientPrecision);
    }
    Ok(StrassmannBound::Finite(index))
}

type OrbitTerms = (Vec<BigRational>, usize, Rc<Vec<Vec<PadicScalar>>>);

/// The family `r -> l M^(s + N r) x - c` for a fixed matrix and period.
#[derive(Debug, Clone)]
pub struct OrbitFamily {
    prime: u64,
    precision: u32,
    matrix: QMatrix,
    period: u64,
    log_valuation: u32,
    /// `log(M^N)` at the largest working precision requested so far.
    log_cache: RefCell<Option<(u32, PadicMatrix)>>,
    /// `L^k y / k!` for `k = 1..=t`, keyed by the orbit point `y` and `t`.
    orbit_cache: RefCell<Vec<OrbitTerms>>,
}

impl OrbitFamily {
    /// Requires `M^period ≡ I (mod p)` and `M` to be `p`-integral.
    pub fn new(matrix: &QMatrix, period: u64, prime: u64, precision: u32) -> Result<Self> {
        check_prime(prime)?;
        let step = PadicMatrix::from_rational(&matrix.pow(period), prime, precision)?;
        if !step.is_identity_mod_p() {
            return Err(PadicError::BadReduction);
        }
        let log_valuation = matrix_log(&step)?.valuation_lower_bound();
        Ok(Self { prime, precision, matrix: matrix.clone(), period, log_valuation, log_cache: RefCell::new(None), orbit_cache: RefCell::default() })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn orbit_terms(&self, y: &[BigRational], t: usize, work: u32) -> Result<Rc<Vec<Vec<PadicScalar>>>> {
        if let Some((_, _, terms)) = self.orbit_cache.borrow().iter().find(|(v, n, _)| v.as_slice() == y && *n == t) {
            return Ok(Rc::clone(terms));
        }
        let p = self.prime;
        let log = self.log_at(work)?;
        let mut u: Vec<PadicScalar> = y.iter().map(|q| PadicScalar::from_rational(p, work, q)).collect::<Result<_>>()?;
        let mut terms = Vec::with_capacity(t);
        for k in 1..=t {
            u = log.mul_vec(&u).iter().map(|x| x.div_int(k as u64)).collect();
            terms.push(u.clone());
        }
        let terms = Rc::new(terms);
        self.orbit_cache.borrow_mut().push((y.to_vec(), t, Rc::clone(&terms)));
        Ok(terms)
    }

    fn log_at(&self, work: u32) -> Result<PadicMatrix> {
        let mut cache = self.log_cache.borrow_mut();
        if let Some((_, log)) = cache.as_ref().filter(|(w, _)| *w >= work) {
            return Ok(log.truncate(work));
        }
        let log = matrix_log(&PadicMatrix::from_rational(&self.matrix.pow(self.period), self.prime, work)?)?;
        *cache = Some((work, log.clone()));
        Ok(log)
    }

    /// Interpolating series for residue class `shift` with `terms + 1`
    /// coefficients, or the smallest certified truncation when `None`.
    pub fn series(
        &self,
        shift: u64,
        start: &[BigRational],
        functional: &[BigRational],
        constant: &BigRational,
        terms: Option<usize>,
    ) -> Result<PadicSeries> {
        let p = self.prime;
        let m = self.precision;
        let y = self.matrix.pow(shift).mul_vec(start);
        let c0 = dot(functional, &y) - constant;
        let min_val = |v: &[BigRational]| v.iter().filter_map(|q| rational_valuation(q, p)).min();
        let (vx, vl) = (min_val(&y), min_val(functional));
        for q in y.iter().chain(functional) {
            if !crate::scalar::is_p_integral(q, p) {
                return Err(PadicError::NotIntegral);
            }
        }
        let inv = Ratio::new(1, p as i64 - 1);
        let slope = Ratio::from_integer(self.log_valuation.min(m) as i64) - inv;
        let intercept = match (vx, vl) {
            (Some(a), Some(b)) => Ratio::from_integer(a + b) + inv,
            _ => Ratio::from_integer(m as i64),
        };
        let tail = TailBound { slope, intercept };
        let needed = (Ratio::from_integer(m as i64) - intercept) / slope;
        let t_min = (needed.ceil().to_integer() - 1).max(0) as usize;
        let t = terms.unwrap_or(t_min.max(MIN_TERMS)).max(1);
        // digits lost to the factorial denominators
        let work = m + (t as u64 / (p - 1)) as u32 + 2;
        let ell: Vec<PadicScalar> =
            functional.iter().map(|q| PadicScalar::from_rational(p, work, q)).collect::<Result<_>>()?;
        let terms = self.orbit_terms(&y, t, work)?;
        let mut coefficients = Vec::with_capacity(t + 1);
        coefficients.push(PadicScalar::from_rational(p, m, &c0)?);
        for u in terms.iter() {
            let mut acc = &ell[0] * &u[0];
            for (a, b) in ell.iter().zip(u).skip(1) {
                acc = &acc + &(a * b);
            }
            coefficients.push(acc.truncate(m));
        }
        Ok(PadicSeries::new(p, m, coefficients, tail))
    }
}

/// Interpolating series of `r -> l M^(shift + period r) x - c`.
#[allow(clippy::too_many_arguments)]
pub fn orbit_series(
    matrix: &QMatrix,
    period: u64,
    shift: u64,
    start: &[BigRational],
    functional: &[BigRational],
    constant: &BigRational,
    prime: u64,
    precision: u32,
) -> Result<PadicSeries> {
    OrbitFamily::new(matrix, period, prime, precision)?.series(shift, start, functional, constant, None)
}

/// Integer zeros of an interpolating series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerZeros {
    pub zeros: Vec<i64>,
    /// `true`: these are all integer zeros. `false`: all zeros with `|r| <= radius`.
    pub complete: bool,
    pub radius: i64,
    /// Strassmann bound of the input series.
    pub bound: usize,
}

/// True when `oracle` vanishes at `0..=order`; for a sequence satisfying a
/// linear recurrence of that order this proves it vanishes identically.
pub fn exact_zero_test(mut oracle: impl FnMut(i64) -> BigRational, order: usize) -> bool {
    (0..=order as i64).all(|r| oracle(r).is_zero())
}

pub fn integer_zeros(series: &PadicSeries, oracle: impl FnMut(i64) -> BigRational) -> Result<IntegerZeros> {
    integer_zeros_within(series, oracle, DEFAULT_RADIUS)
}

struct Branch {
    series: PadicSeries,
    center: i128,
    scale: i128,
    center_done: bool,
}

/// Isolates integer zeros by refining residue discs of `Z_p`. `oracle` must
/// return the exact value the series interpolates at an integer.
pub fn integer_zeros_within(
    series: &PadicSeries,
    mut oracle: impl FnMut(i64) -> BigRational,
    radius: i64,
) -> Result<IntegerZeros> {
    let p = series.prime;
    let half = (p as i64 - 1) / 2;
    let radius = radius.clamp(0, i64::MAX / 4);
    let bound = match strassmann_bound(series)? {
        StrassmannBound::IdenticallyZero => return Err(PadicError::NotFinite),
        StrassmannBound::Finite(n) => n,
    };
    let mut zeros = BTreeSet::new();
    let mut complete = true;
    let mut stack = vec![Branch { series: series.clone(), center: 0, scale: 1, center_done: false }];
    while let Some(mut branch) = stack.pop() {
        let mut n = match strassmann_bound(&branch.series) {
            Ok(StrassmannBound::Finite(n)) => n,
            Ok(StrassmannBound::IdenticallyZero) | Err(_) => return Err(PadicError::PrecisionExhausted),
        };
        if n > 0
            && !branch.center_done
            && branch.series.coefficients[0].is_zero_to_precision()
            && branch.center.abs() <= radius as i128
        {
            let c = branch.center as i64;
            branch.center_done = true;
            if oracle(c).is_zero() {
                zeros.insert(c);
                branch.series = branch.series.deflate();
                n = match strassmann_bound(&branch.series) {
                    Ok(StrassmannBound::Finite(n)) => n,
                    Ok(StrassmannBound::IdenticallyZero) | Err(_) => return Err(PadicError::PrecisionExhausted),
                };
            }
        }
        if n == 0 {
            continue;
        }
        if branch.scale > 2 * radius as i128 {
            complete = false;
            continue;
        }
        for digit in -half..=half {
            stack.push(Branch {
                series: branch.series.substitute(digit),
                center: branch.center + branch.scale * digit as i128,
                scale: branch.scale * p as i128,
                center_done: branch.center_done && digit == 0,
            });
        }
    }
    Ok(IntegerZeros { zeros: zeros.into_iter().collect(), complete, radius, bound })
}
