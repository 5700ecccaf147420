use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::scalar::Scalar;

use super::poly::{format_monomial, variable_names, Poly};

/// Monomials of total degree `<= order` in graded-lexicographic order:
/// by degree, then with larger leading exponents first (`x^2, x*y, y^2`).
#[derive(Debug)]
pub struct MonomialBasis {
    nvars: usize,
    order: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials_of_degree(nvars - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl MonomialBasis {
    /// Shared basis for `(nvars, order)`.
    pub fn get(nvars: usize, order: usize) -> Arc<MonomialBasis> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<MonomialBasis>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        map.entry((nvars, order))
            .or_insert_with(|| {
                let monomials: Vec<Vec<u32>> =
                    (0..=order as u32).flat_map(|d| monomials_of_degree(nvars, d)).collect();
                let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
                Arc::new(MonomialBasis { nvars, order, monomials, index })
            })
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.monomials[i].iter().sum::<u32>() as usize
    }

    /// Number of monomials of degree `<= k` (a prefix of the basis).
    pub fn prefix_len(&self, k: usize) -> usize {
        self.monomials.iter().take_while(|m| m.iter().sum::<u32>() as usize <= k).count()
    }
}

/// Element of `J_K = O / m^(K+1)` in `d` variables.
#[derive(Clone)]
pub struct Jet<T> {
    basis: Arc<MonomialBasis>,
    coefficients: Vec<T>,
}

impl<T: PartialEq> PartialEq for Jet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.basis.nvars == other.basis.nvars
            && self.basis.order == other.basis.order
            && self.coefficients == other.coefficients
    }
}

impl<T: Scalar> Jet<T> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        let basis = MonomialBasis::get(nvars, order);
        let coefficients = vec![T::zero(); basis.len()];
        Self { basis, coefficients }
    }

    pub fn from_coefficients(nvars: usize, order: usize, coefficients: Vec<T>) -> Self {
        let basis = MonomialBasis::get(nvars, order);
        assert_eq!(coefficients.len(), basis.len());
        Self { basis, coefficients }
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn nvars(&self) -> usize {
        self.basis.nvars
    }

    pub fn order(&self) -> usize {
        self.basis.order
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<T> {
        self.coefficients
    }

    pub fn coefficient(&self, exps: &[u32]) -> T {
        self.basis.index_of(exps).map_or_else(T::zero, |i| self.coefficients[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(T::is_zero)
    }

    pub fn constant_term(&self) -> T {
        self.coefficients[0].clone()
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coefficients.iter().position(|c| !c.is_zero()).map(|i| self.basis.degree(i))
    }

    /// Truncation (or zero extension) to another order.
    pub fn truncate(&self, order: usize) -> Self {
        let mut out = Self::zero(self.nvars(), order);
        for (i, m) in self.basis.monomials.iter().enumerate() {
            if let Some(j) = out.basis.index_of(m) {
                out.coefficients[j] = self.coefficients[i].clone();
            }
        }
        out
    }

    fn same_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.basis, &other.basis)
                || (self.nvars() == other.nvars() && self.order() == other.order()),
            "jets live in different spaces"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_space(other);
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { basis: self.basis.clone(), coefficients }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_space(other);
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { basis: self.basis.clone(), coefficients }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { basis: self.basis.clone(), coefficients: self.coefficients.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// Product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Self {
        self.same_space(other);
        let mut out = Self::zero(self.nvars(), self.order());
        let k = self.order();
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let di = self.basis.degree(i);
            for (j, b) in other.coefficients.iter().enumerate() {
                if b.is_zero() || di + self.basis.degree(j) > k {
                    continue;
                }
                let e: Vec<u32> = self.basis.monomials[i].iter().zip(&self.basis.monomials[j]).map(|(x, y)| x + y).collect();
                let idx = self.basis.index[&e];
                out.coefficients[idx] = out.coefficients[idx].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    /// Multiplication by the monomial `x^e`, truncated.
    pub fn shift(&self, exps: &[u32]) -> Self {
        let mut out = Self::zero(self.nvars(), self.order());
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e: Vec<u32> = self.basis.monomials[i].iter().zip(exps).map(|(x, y)| x + y).collect();
            if let Some(j) = out.basis.index_of(&e) {
                out.coefficients[j] = c.clone();
            }
        }
        out
    }

    pub fn to_poly(&self) -> Poly<T> {
        Poly::from_terms(
            self.nvars(),
            self.basis.monomials.iter().cloned().zip(self.coefficients.iter().cloned()).filter(|(_, c)| !c.is_zero()),
        )
    }
}

/// Truncation of a polynomial at total degree `order`.
pub fn jet_of<T: Scalar>(poly: &Poly<T>, order: usize) -> Jet<T> {
    let mut out = Jet::zero(poly.nvars(), order);
    for (e, c) in poly.terms() {
        if let Some(i) = out.basis.index_of(e) {
            out.coefficients[i] = c.clone();
        }
    }
    out
}

impl<T: Scalar + fmt::Display> fmt::Display for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(m^{})", self.to_poly(), self.order() + 1)
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Human-readable monomial label of basis index `i`.
pub fn monomial_label(basis: &MonomialBasis, i: usize) -> String {
    format_monomial(&basis.monomials[i], &variable_names(basis.nvars))
}
