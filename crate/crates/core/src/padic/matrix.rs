use super::scalar::PadicScalar;
use super::{check_prime, PadicError, Result};
use crate::QMatrix;

/// Dense matrix over `Z_p` with per-entry precision.
#[derive(Clone, Debug)]
pub struct PadicMatrix {
    prime: u64,
    rows: usize,
    cols: usize,
    data: Vec<PadicScalar>,
}

impl PadicMatrix {
    pub fn from_rational(m: &QMatrix, prime: u64, precision: u32) -> Result<Self> {
        let data = m
            .entries()
            .map(|q| PadicScalar::from_rational(prime, precision, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { prime, rows: m.rows(), cols: m.cols(), data })
    }

    pub fn identity(n: usize, prime: u64, precision: u32) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(PadicScalar::from_i64(prime, precision, (i == j) as i64));
            }
        }
        Self { prime, rows: n, cols: n, data }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicScalar {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &PadicScalar> {
        self.data.iter()
    }

    /// Smallest entry precision.
    pub fn precision(&self) -> u32 {
        self.data.iter().map(PadicScalar::precision).min().unwrap_or(u32::MAX)
    }

    /// Lower bound on the valuation of every entry.
    pub fn valuation_lower_bound(&self) -> u32 {
        self.data.iter().map(|x| x.valuation().lower_bound()).min().unwrap_or(u32::MAX)
    }

    fn zip(&self, other: &Self, f: impl Fn(&PadicScalar, &PadicScalar) -> PadicScalar) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Self { prime: self.prime, rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn map(&self, f: impl Fn(&PadicScalar) -> PadicScalar) -> Self {
        Self { prime: self.prime, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn truncate(&self, precision: u32) -> Self {
        self.map(|x| x.truncate(precision))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0) * other.get(0, j);
                for k in 1..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                data.push(acc);
            }
        }
        Self { prime: self.prime, rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[PadicScalar]) -> Vec<PadicScalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0) * &v[0];
                for (k, x) in v.iter().enumerate().skip(1) {
                    acc = &acc + &(self.get(i, k) * x);
                }
                acc
            })
            .collect()
    }

    /// `v^T A` for a row vector `v`.
    pub fn vec_mul(&self, v: &[PadicScalar]) -> Vec<PadicScalar> {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| {
                let mut acc = &v[0] * self.get(0, j);
                for (k, x) in v.iter().enumerate().skip(1) {
                    acc = &acc + &(x * self.get(k, j));
                }
                acc
            })
            .collect()
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| a.agrees_with(b))
    }

    pub fn agrees_with_rational(&self, m: &QMatrix) -> bool {
        self.rows == m.rows() && self.cols == m.cols() && self.data.iter().zip(m.entries()).all(|(a, q)| a.agrees_with_rational(q))
    }
}

fn ilog(p: u64, k: u64) -> u64 {
    let mut e = 0;
    let mut x = k;
    while x >= p {
        x /= p;
        e += 1;
    }
    e
}

/// `log(M) = sum (-1)^(k+1) (M - I)^k / k` for `M ≡ I mod p`, correct to the
/// precision of `M`.
pub fn matrix_log(m: &PadicMatrix) -> Result<PadicMatrix> {
    let p = m.prime;
    check_prime(p)?;
    assert_eq!(m.rows, m.cols);
    let target = m.precision();
    let a = m.sub(&PadicMatrix::identity(m.rows, p, target));
    if a.valuation_lower_bound() < 1 {
        return Err(PadicError::BadReduction);
    }
    let mut sum = a.clone();
    let mut power = a.clone();
    let mut k: u64 = 2;
    // v(A^k / k) >= k - log_p k, nondecreasing in k
    while k - ilog(p, k) < target as u64 {
        power = power.mul(&a);
        let term = power.map(|x| x.div_int(k));
        sum = if k.is_multiple_of(2) { sum.sub(&term) } else { sum.add(&term) };
        k += 1;
    }
    Ok(sum.truncate(target))
}

/// `exp(A) = sum A^k / k!` for `A ≡ 0 mod p`, correct to the precision of `A`.
pub fn matrix_exp(a: &PadicMatrix) -> Result<PadicMatrix> {
    let p = a.prime;
    check_prime(p)?;
    assert_eq!(a.rows, a.cols);
    let target = a.precision();
    if a.valuation_lower_bound() < 1 {
        return Err(PadicError::BadReduction);
    }
    let mut sum = PadicMatrix::identity(a.rows, p, target).add(a);
    let mut term = a.clone();
    let mut k: u64 = 2;
    // v(A^k / k!) >= k - (k - 1)/(p - 1)
    while k - (k - 1) / (p - 1) < target as u64 {
        term = term.mul(a).map(|x| x.div_int(k));
        sum = sum.add(&term);
        k += 1;
    }
    Ok(sum.truncate(target))
}

impl PadicMatrix {
    /// True when the matrix is square and reduces to the identity modulo `p`.
    pub fn is_identity_mod_p(&self) -> bool {
        self.rows == self.cols
            && self.sub(&PadicMatrix::identity(self.rows, self.prime, self.precision())).valuation_lower_bound() >= 1
    }
}
