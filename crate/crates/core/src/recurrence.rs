//! Return sets of rational linear and affine automorphisms.
//!
//! Every query reduces to finitely many homogeneous functionals `φ` and the
//! sets `{n : φ(Mⁿ x) = 0}`. Those are solved on the cyclic (Krylov) subspace
//! generated by `x`, split into residue classes modulo the reduction order `N`,
//! and settled class by class with the `p`-adic interpolation of `r ↦ M^(s+Nr)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{dot, Matrix};
use crate::padic::{
    exact_zero_test, integer_zeros_within, strassmann_bound, OrbitFamily, PadicError, StrassmannBound,
    DEFAULT_PRECISION, PRECISION_CAP,
};
use crate::scalar::{is_p_integral, odd_primes, rational_mod, rational_valuation};
use crate::semilinear::{intersect_family, Progression, SemilinearError};
use crate::{QMatrix, Rational, SemilinearSet, Sidedness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not invertible modulo {0}")]
    NotInvertibleModP(u64),
    #[error("prime {0} does not give good reduction for this problem")]
    BadPrime(u64),
    #[error("degenerate target: {0}")]
    DegenerateTarget(&'static str),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Semilinear(#[from] SemilinearError),
}

pub type Result<T> = std::result::Result<T, SolveError>;

/// The orbit `n ↦ fⁿ(x)` of `f(y) = M y + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    matrix: QMatrix,
    translation: Option<Vec<Rational>>,
    start: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(matrix: QMatrix, start: Vec<Rational>) -> Result<Self> {
        Self::affine(matrix, None, start)
    }

    pub fn affine(matrix: QMatrix, translation: Option<Vec<Rational>>, start: Vec<Rational>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(SolveError::NotSquare(matrix.rows(), matrix.cols()));
        }
        let r = matrix.rows();
        if start.len() != r {
            return Err(SolveError::Dimension { expected: r, got: start.len() });
        }
        if let Some(b) = &translation {
            if b.len() != r {
                return Err(SolveError::Dimension { expected: r, got: b.len() });
            }
        }
        if r == 0 || matrix.determinant().is_zero() {
            return Err(SolveError::Singular);
        }
        let translation = translation.filter(|b| b.iter().any(|q| !q.is_zero()));
        Ok(Self { matrix, translation, start })
    }

    /// Companion system of `u_{n+d} = a_1 u_{n+d-1} + ... + a_d u_n` with
    /// state `(u_n, ..., u_{n+d-1})`; `a_d` must be nonzero.
    pub fn from_recurrence(coefficients: &[Rational], initial: &[Rational]) -> Result<Self> {
        let d = coefficients.len();
        if initial.len() != d {
            return Err(SolveError::Dimension { expected: d, got: initial.len() });
        }
        let mut m = Matrix::zeros(d, d);
        for i in 0..d.saturating_sub(1) {
            m[(i, i + 1)] = Rational::one();
        }
        for (j, a) in coefficients.iter().enumerate() {
            m[(d - 1, d - 1 - j)] = a.clone();
        }
        Self::new(m, initial.to_vec())
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> Option<&[Rational]> {
        self.translation.as_deref()
    }

    pub fn start(&self) -> &[Rational] {
        &self.start
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    /// `(M', x')` with `M' = [[M, b], [0, 1]]` and `x' = (x, 1)`.
    pub fn homogenized(&self) -> (QMatrix, Vec<Rational>) {
        let r = self.dimension();
        let mut m = Matrix::zeros(r + 1, r + 1);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] = self.matrix[(i, j)].clone();
            }
            if let Some(b) = &self.translation {
                m[(i, r)] = b[i].clone();
            }
        }
        m[(r, r)] = Rational::one();
        let mut x = self.start.clone();
        x.push(Rational::one());
        (m, x)
    }

    /// `f(y)`.
    pub fn step(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = self.matrix.mul_vec(y);
        if let Some(b) = &self.translation {
            for (o, bi) in out.iter_mut().zip(b) {
                *o += bi;
            }
        }
        out
    }

    /// `fⁿ(x)` for any integer `n`.
    pub fn state(&self, n: i64) -> Vec<Rational> {
        let (m, x) = self.homogenized();
        let mut y = m.pow_signed(n).expect("invertible").mul_vec(&x);
        y.pop();
        y
    }

    fn inverse_system(&self) -> LinearSystem {
        let inv = self.matrix.inverse().expect("invertible");
        let translation = self.translation.as_ref().map(|b| inv.mul_vec(b).into_iter().map(|q| -q).collect());
        LinearSystem { matrix: inv, translation, start: self.start.clone() }
    }

    fn rationals(&self) -> impl Iterator<Item = &Rational> {
        self.matrix.entries().chain(self.translation.iter().flatten()).chain(&self.start)
    }
}

/// What the orbit has to hit.
#[derive(Debug, Clone, PartialEq)]
pub enum ReturnTarget {
    /// `ℓ(y) = c`.
    Hyperplane { functional: Vec<Rational>, constant: Rational },
    Point(Vec<Rational>),
    /// Span of the columns of the basis matrix.
    Subspace(QMatrix),
}

impl ReturnTarget {
    pub fn contains(&self, y: &[Rational]) -> bool {
        match self {
            ReturnTarget::Hyperplane { functional, constant } => &dot(functional, y) == constant,
            ReturnTarget::Point(p) => p.as_slice() == y,
            ReturnTarget::Subspace(w) => w.cols() == 0 && y.iter().all(Zero::is_zero) || w.solve(y).is_some(),
        }
    }

    /// Affine functionals `(φ, c)` cutting out the target.
    fn equations(&self, dim: usize) -> Result<Vec<(Vec<Rational>, Rational)>> {
        match self {
            ReturnTarget::Hyperplane { functional, constant } => {
                check_len(dim, functional.len())?;
                // 0 = c holds everywhere or nowhere; the nonzero case survives homogenization
                if functional.iter().all(Zero::is_zero) && constant.is_zero() {
                    return Ok(Vec::new());
                }
                Ok(vec![(functional.clone(), constant.clone())])
            }
            ReturnTarget::Point(p) => {
                check_len(dim, p.len())?;
                Ok((0..dim)
                    .map(|i| {
                        let mut e = vec![Rational::zero(); dim];
                        e[i] = Rational::one();
                        (e, p[i].clone())
                    })
                    .collect())
            }
            ReturnTarget::Subspace(w) => {
                check_len(dim, w.rows())?;
                if w.rank() != w.cols() {
                    return Err(SolveError::DegenerateTarget("subspace basis is not of full column rank"));
                }
                let annihilators = if w.cols() == 0 { Matrix::<Rational>::identity(dim).to_rows() } else { w.left_kernel() };
                Ok(annihilators.into_iter().map(|a| (a, Rational::zero())).collect())
            }
        }
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(SolveError::Dimension { expected, got })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOptions {
    /// Forces the prime; it must give good reduction.
    pub prime: Option<u64>,
    /// Starting precision; doubled on exhaustion up to the cap.
    pub precision: u32,
    /// Integer zeros are certified at least for `|n| <= radius`.
    pub radius: i64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { prime: None, precision: DEFAULT_PRECISION, radius: 1 << 20 }
    }
}

/// How one residue class `s mod N` was settled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassOutcome {
    /// Exact vanishing on `r = 0..=order` proved the whole class.
    Vanishes,
    /// The listed `n` are the zeros; `complete` means all of them, otherwise
    /// all with `|n| <= radius`.
    Zeros { zeros: Vec<i64>, bound: usize, complete: bool, radius: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCertificate {
    pub residue: u64,
    pub outcome: ClassOutcome,
}

/// Evidence for one homogeneous functional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneCertificate {
    pub prime: u64,
    pub period: u64,
    pub precision: u32,
    /// Dimension of the cyclic subspace the functional was solved on.
    pub order: usize,
    pub classes: Vec<ClassCertificate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub set: SemilinearSet,
    pub certificates: Vec<HyperplaneCertificate>,
}

impl Solution {
    fn exact(set: SemilinearSet) -> Self {
        Self { set, certificates: Vec::new() }
    }

    /// Whether every class was settled over all of `Z`.
    pub fn is_complete(&self) -> bool {
        self.incomplete_radius().is_none()
    }

    /// Smallest radius a class was only certified up to.
    pub fn incomplete_radius(&self) -> Option<i64> {
        self.certificates
            .iter()
            .flat_map(|c| &c.classes)
            .filter_map(|c| match &c.outcome {
                ClassOutcome::Zeros { complete: false, radius, .. } => Some(*radius),
                _ => None,
            })
            .min()
    }
}

fn admissible<'a>(p: u64, mut values: impl Iterator<Item = &'a Rational>, det: &Rational) -> bool {
    values.all(|q| is_p_integral(q, p)) && rational_valuation(det, p) == Some(0)
}

/// Smallest odd prime at which `M`, `b`, and `x` are integral and `det M` is a unit.
pub fn good_prime(sys: &LinearSystem) -> u64 {
    let det = sys.matrix.determinant();
    odd_primes().find(|&p| admissible(p, sys.rationals(), &det)).expect("primes are unbounded")
}

/// Smallest `N >= 1` with `Mᴺ ≡ I (mod p)`.
pub fn reduction_order(m: &QMatrix, p: u64) -> Result<u64> {
    let n = m.rows();
    let modulus = num_bigint::BigInt::from(p);
    let mut reduced = vec![0u64; n * n];
    for (slot, q) in reduced.iter_mut().zip(m.entries()) {
        *slot = rational_mod(q, &modulus).ok_or(SolveError::NotInvertibleModP(p))?.to_u64().unwrap();
    }
    let det = m.determinant();
    if rational_valuation(&det, p) != Some(0) {
        return Err(SolveError::NotInvertibleModP(p));
    }
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut c = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    c[i * n + j] = (c[i * n + j] + aik * b[k * n + j]) % p;
                }
            }
        }
        c
    };
    let identity: Vec<u64> = (0..n * n).map(|i| (i / n == i % n) as u64).collect();
    let mut power = reduced.clone();
    let mut order = 1u64;
    while power != identity {
        power = mul(&power, &reduced);
        order += 1;
    }
    Ok(order)
}

/// Exponent of `GL_r(F_3)`: every point-return period at `p = 3` divides it.
pub fn uniform_period_bound(r: usize) -> BigUint {
    assert!(r >= 1);
    let mut lcm = BigUint::one();
    let mut pow3 = BigUint::one();
    for _ in 1..=r {
        pow3 *= 3u32;
        lcm = lcm.lcm(&(&pow3 - 1u32));
    }
    // smallest power of 3 that is >= r (unipotent part)
    let mut unipotent = BigUint::one();
    while unipotent < BigUint::from(r) {
        unipotent *= 3u32;
    }
    lcm * unipotent
}

/// Cyclic subspace of `x`: its basis `x, Mx, ...` and the companion matrix of
/// `M` restricted to it.
fn krylov(m: &QMatrix, x: &[Rational]) -> (Vec<Vec<Rational>>, QMatrix) {
    let n = m.rows();
    let mut basis = vec![x.to_vec()];
    let coeffs = loop {
        let next = m.mul_vec(basis.last().unwrap());
        if let Some(c) = Matrix::from_columns(n, &basis).solve(&next) {
            break c;
        }
        basis.push(next);
    };
    let k = basis.len();
    let mut companion = Matrix::zeros(k, k);
    for i in 0..k - 1 {
        companion[(i + 1, i)] = Rational::one();
    }
    for (i, c) in coeffs.into_iter().enumerate() {
        companion[(i, k - 1)] = c;
    }
    (basis, companion)
}

/// Rescales a nonzero rational vector to a primitive integer vector.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let den = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

struct Reduced {
    companion: QMatrix,
    functionals: Vec<Vec<Rational>>,
}

impl Reduced {
    fn admissible(&self, p: u64) -> bool {
        let det = self.companion.determinant();
        admissible(p, self.companion.entries().chain(self.functionals.iter().flatten()), &det)
    }
}

fn solve_equations(sys: &LinearSystem, equations: Vec<(Vec<Rational>, Rational)>, opts: &SolverOptions) -> Result<Solution> {
    let homogeneous = sys.translation.is_none() && equations.iter().all(|(_, c)| c.is_zero());
    let (m, x, functionals): (QMatrix, Vec<Rational>, Vec<Vec<Rational>>) = if homogeneous {
        (sys.matrix.clone(), sys.start.clone(), equations.into_iter().map(|(f, _)| f).collect())
    } else {
        let (m, x) = sys.homogenized();
        let fs = equations
            .into_iter()
            .map(|(mut f, c)| {
                f.push(-c);
                f
            })
            .collect();
        (m, x, fs)
    };
    if functionals.is_empty() || x.iter().all(Zero::is_zero) {
        return Ok(Solution::exact(SemilinearSet::full(Sidedness::TwoSided)));
    }
    let (basis, companion) = krylov(&m, &x);
    let restricted: Vec<Vec<Rational>> = functionals.iter().map(|f| basis.iter().map(|b| dot(f, b)).collect()).collect();
    let functionals: Vec<Vec<Rational>> =
        Matrix::from_rows(restricted).row_space_basis().into_iter().map(primitive).collect();
    if functionals.is_empty() {
        return Ok(Solution::exact(SemilinearSet::full(Sidedness::TwoSided)));
    }
    let reduced = Reduced { companion, functionals };
    let p = match opts.prime {
        Some(p) => {
            if !crate::scalar::is_odd_prime(p) {
                return Err(PadicError::NotPrime(p).into());
            }
            if !reduced.admissible(p) {
                return Err(SolveError::BadPrime(p));
            }
            p
        }
        None => {
            let det = sys.matrix.determinant();
            odd_primes()
                .find(|&p| reduced.admissible(p) && admissible(p, sys.rationals(), &det))
                .expect("primes are unbounded")
        }
    };
    let period = reduction_order(&reduced.companion, p)?;
    let mut sets = Vec::new();
    let mut certificates = Vec::new();
    let mut families = Vec::new();
    for f in &reduced.functionals {
        let (set, cert) = solve_reduced(&reduced.companion, f, p, period, opts, &mut families)?;
        sets.push(set);
        certificates.push(cert);
    }
    let set = intersect_family(&sets, period as i64)?;
    Ok(Solution { set, certificates })
}

/// `{n : ℓ(Cⁿ e₀) = 0}` with precision retries.
fn solve_reduced(
    c: &QMatrix,
    ell: &[Rational],
    p: u64,
    period: u64,
    opts: &SolverOptions,
    families: &mut Vec<OrbitFamily>,
) -> Result<(SemilinearSet, HyperplaneCertificate)> {
    let mut precision = opts.precision.max(1);
    loop {
        // functionals share the orbit, so one family per precision serves them all
        let family = match families.iter().position(|f| f.precision() == precision) {
            Some(i) => &families[i],
            None => {
                families.push(OrbitFamily::new(c, period, p, precision)?);
                families.last().unwrap()
            }
        };
        match attempt(family, c, ell, p, period, precision, opts.radius) {
            Err(SolveError::Padic(PadicError::InsufficientPrecision | PadicError::PrecisionExhausted))
                if precision * 2 <= PRECISION_CAP =>
            {
                precision *= 2;
            }
            Err(SolveError::Padic(PadicError::InsufficientPrecision)) => {
                return Err(PadicError::PrecisionExhausted.into());
            }
            other => return other,
        }
    }
}

fn attempt(
    family: &OrbitFamily,
    c: &QMatrix,
    ell: &[Rational],
    p: u64,
    period: u64,
    precision: u32,
    radius: i64,
) -> Result<(SemilinearSet, HyperplaneCertificate)> {
    let k = c.rows();
    let mut e0 = vec![Rational::zero(); k];
    e0[0] = Rational::one();
    let n = period as i64;
    let step = c.pow(period);
    let step_inv = step.inverse().expect("invertible");
    let r_radius = (radius / n).max(1);
    let mut exceptional = Vec::new();
    let mut progressions = Vec::new();
    let mut classes = Vec::new();
    for s in 0..period {
        let base = c.pow(s).mul_vec(&e0);
        let oracle = |r: i64| {
            let pw = if r >= 0 { step.pow(r as u64) } else { step_inv.pow(r.unsigned_abs()) };
            dot(ell, &pw.mul_vec(&base))
        };
        let series = family.series(s, &e0, ell, &Rational::zero(), None)?;
        let outcome = match strassmann_bound(&series)? {
            StrassmannBound::IdenticallyZero => {
                if !exact_zero_test(oracle, k) {
                    return Err(PadicError::InsufficientPrecision.into());
                }
                progressions.push(Progression::new(s as i64, n)?);
                ClassOutcome::Vanishes
            }
            StrassmannBound::Finite(_) => {
                let found = integer_zeros_within(&series, oracle, r_radius)?;
                let zeros: Vec<i64> = found.zeros.iter().map(|r| s as i64 + n * r).collect();
                exceptional.extend(&zeros);
                ClassOutcome::Zeros {
                    zeros,
                    bound: found.bound,
                    complete: found.complete,
                    radius: found.radius.saturating_mul(n),
                }
            }
        };
        classes.push(ClassCertificate { residue: s, outcome });
    }
    let set = SemilinearSet::new(Sidedness::TwoSided, exceptional, progressions)?;
    Ok((set, HyperplaneCertificate { prime: p, period, precision, order: k, classes }))
}

pub fn solve_hyperplane_certified(
    sys: &LinearSystem,
    functional: &[Rational],
    constant: &Rational,
    opts: &SolverOptions,
) -> Result<Solution> {
    let target = ReturnTarget::Hyperplane { functional: functional.to_vec(), constant: constant.clone() };
    solve_equations(sys, target.equations(sys.dimension())?, opts)
}

/// `{n ∈ Z : ℓ(fⁿ(x)) = c}`.
pub fn solve_hyperplane(sys: &LinearSystem, functional: &[Rational], constant: &Rational) -> Result<SemilinearSet> {
    Ok(solve_hyperplane_certified(sys, functional, constant, &SolverOptions::default())?.set)
}

pub fn solve_point_certified(sys: &LinearSystem, y: &[Rational], opts: &SolverOptions) -> Result<Solution> {
    solve_equations(sys, ReturnTarget::Point(y.to_vec()).equations(sys.dimension())?, opts)
}

/// `{n ∈ Z : fⁿ(x) = y}`.
pub fn solve_point(sys: &LinearSystem, y: &[Rational]) -> Result<SemilinearSet> {
    Ok(solve_point_certified(sys, y, &SolverOptions::default())?.set)
}

pub fn solve_subspace_certified(sys: &LinearSystem, basis: &QMatrix, opts: &SolverOptions) -> Result<Solution> {
    solve_equations(sys, ReturnTarget::Subspace(basis.clone()).equations(sys.dimension())?, opts)
}

/// `{n ∈ Z : fⁿ(x) ∈ span(W)}` for the columns `W` of `basis`.
pub fn solve_subspace(sys: &LinearSystem, basis: &QMatrix) -> Result<SemilinearSet> {
    Ok(solve_subspace_certified(sys, basis, &SolverOptions::default())?.set)
}

pub fn solve_certified(sys: &LinearSystem, target: &ReturnTarget, opts: &SolverOptions) -> Result<Solution> {
    solve_equations(sys, target.equations(sys.dimension())?, opts)
}

/// Exact membership of every `n` in `[-h, h]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub h: i64,
    /// `hits[i]` is membership of `n = i - h`.
    pub hits: Vec<bool>,
}

impl Window {
    pub fn members(&self) -> Vec<i64> {
        self.hits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as i64 - self.h).collect()
    }

    pub fn agrees_with(&self, set: &SemilinearSet) -> bool {
        self.hits.iter().enumerate().all(|(i, &b)| set.contains(i as i64 - self.h) == b)
    }

    /// First `n` where the window and `set` disagree.
    pub fn first_disagreement(&self, set: &SemilinearSet) -> Option<i64> {
        (0..self.hits.len()).map(|i| i as i64 - self.h).find(|&n| set.contains(n) != self.hits[(n + self.h) as usize])
    }
}

/// Evaluates `predicate(fⁿ(x))` exactly for `|n| <= h`.
pub fn brute_window(sys: &LinearSystem, mut predicate: impl FnMut(&[Rational]) -> bool, h: i64) -> Window {
    let h = h.max(0);
    let mut hits = vec![false; (2 * h + 1) as usize];
    let inverse = sys.inverse_system();
    let mut forward = sys.start.clone();
    let mut backward = sys.start.clone();
    hits[h as usize] = predicate(&forward);
    for n in 1..=h {
        forward = sys.step(&forward);
        backward = inverse.step(&backward);
        hits[(h + n) as usize] = predicate(&forward);
        hits[(h - n) as usize] = predicate(&backward);
    }
    Window { h, hits }
}

impl LinearSystem {
    /// Largest absolute numerator or denominator among the inputs; a size hint.
    pub fn height(&self) -> num_bigint::BigInt {
        self.rationals().flat_map(|q| [q.numer().abs(), q.denom().abs()]).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_frac};

    fn q(rows: Vec<Vec<i64>>) -> QMatrix {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    #[test]
    fn reduction_orders() {
        assert_eq!(reduction_order(&q(vec![vec![0, -1], vec![1, 0]]), 3).unwrap(), 4);
        assert_eq!(reduction_order(&q(vec![vec![1, 0], vec![0, 1]]), 3).unwrap(), 1);
        assert_eq!(reduction_order(&q(vec![vec![0, 1], vec![1, 1]]), 3).unwrap(), 8);
        assert_eq!(reduction_order(&q(vec![vec![3]]), 3).unwrap_err(), SolveError::NotInvertibleModP(3));
    }

    #[test]
    fn good_primes() {
        let fib = LinearSystem::new(q(vec![vec![0, 1], vec![1, 1]]), vec![rat(0), rat(1)]).unwrap();
        assert_eq!(good_prime(&fib), 3);
        let mut m = q(vec![vec![1, 0], vec![0, 1]]);
        m[(0, 1)] = rat_frac(1, 5);
        assert_eq!(good_prime(&LinearSystem::new(m, vec![rat(1), rat(0)]).unwrap()), 3);
        let m3 = q(vec![vec![1, 0], vec![0, 3]]);
        assert_eq!(good_prime(&LinearSystem::new(m3, vec![rat(1), rat(0)]).unwrap()), 5);
    }

    #[test]
    fn period_bounds() {
        assert_eq!(uniform_period_bound(1), BigUint::from(2u32));
        assert_eq!(uniform_period_bound(2), BigUint::from(24u32));
        assert_eq!(uniform_period_bound(3), BigUint::from(312u32));
    }

    #[test]
    fn krylov_reduces_to_cyclic_subspace() {
        let m = q(vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        let (basis, c) = krylov(&m, &[rat(1), rat(1), rat(0)]);
        assert_eq!(basis.len(), 2);
        // minimal polynomial (t - 2)(t - 3) = t^2 - 5t + 6
        assert_eq!(c, q(vec![vec![0, -6], vec![1, 5]]));
    }

    fn set(text: &str) -> SemilinearSet {
        text.parse().unwrap()
    }

    #[test]
    fn fibonacci_zero_set() {
        let fib = LinearSystem::new(q(vec![vec![0, 1], vec![1, 1]]), vec![rat(0), rat(1)]).unwrap();
        let sol = solve_hyperplane_certified(&fib, &[rat(1), rat(0)], &rat(0), &SolverOptions::default()).unwrap();
        assert_eq!(sol.set, set("{0} [two-sided]"));
        assert_eq!(sol.certificates[0].prime, 3);
        assert_eq!(sol.certificates[0].period, 8);
    }

    #[test]
    fn periodic_recurrence() {
        let sys = LinearSystem::from_recurrence(&[rat(1), rat(-1)], &[rat(0), rat(1)]).unwrap();
        let sol = solve_hyperplane_certified(&sys, &[rat(1), rat(0)], &rat(0), &SolverOptions::default()).unwrap();
        assert_eq!(sol.set, set("(0 mod 3) [two-sided]"));
        assert!(sol.is_complete());
    }

    #[test]
    fn rotation_returns() {
        let rot = LinearSystem::new(q(vec![vec![0, -1], vec![1, 0]]), vec![rat(1), rat(0)]).unwrap();
        assert_eq!(solve_hyperplane(&rot, &[rat(1), rat(0)], &rat(0)).unwrap(), set("(1 mod 2)"));
        assert_eq!(solve_point(&rot, &[rat(0), rat(1)]).unwrap(), set("(1 mod 4)"));
        let axis = Matrix::from_columns(2, &[vec![rat(1), rat(0)]]);
        assert_eq!(solve_subspace(&rot, &axis).unwrap(), set("(0 mod 2)"));
    }

    #[test]
    fn fibonacci_point_return() {
        let fib = LinearSystem::new(q(vec![vec![0, 1], vec![1, 1]]), vec![rat(0), rat(1)]).unwrap();
        assert_eq!(solve_point(&fib, &[rat(1), rat(1)]).unwrap(), set("{1}"));
    }

    #[test]
    fn degenerate_targets() {
        let id = LinearSystem::new(q(vec![vec![1, 0], vec![0, 1]]), vec![rat(2), rat(3)]).unwrap();
        assert!(solve_point(&id, &[rat(2), rat(3)]).unwrap().is_full());
        assert!(solve_subspace(&id, &QMatrix::identity(2)).unwrap().is_full());
        let zero_basis = Matrix::zeros(2, 0);
        assert!(solve_subspace(&id, &zero_basis).unwrap().is_empty());
    }

    #[test]
    fn affine_orbit() {
        // n ↦ x + n: hits 5 exactly once
        let sys = LinearSystem::affine(q(vec![vec![1]]), Some(vec![rat(1)]), vec![rat(0)]).unwrap();
        assert_eq!(solve_point(&sys, &[rat(5)]).unwrap(), set("{5}"));
        assert_eq!(solve_point(&sys, &[rat(-4)]).unwrap(), set("{-4}"));
    }
}
