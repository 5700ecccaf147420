use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::jet::{Jet, MonomialBasis};
use super::JetError;

/// Subspace of `J_order`, stored as a reduced column-echelon basis.
#[derive(Clone, PartialEq)]
pub struct JetSubspace<T> {
    nvars: usize,
    order: usize,
    /// Columns are jets; reduced, so equal subspaces have equal bases.
    basis: Matrix<T>,
}

impl<T: Scalar> std::fmt::Debug for JetSubspace<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "JetSubspace(J_{}, dim {})", self.order, self.dim())
    }
}

impl<T: Scalar> JetSubspace<T> {
    pub fn span(nvars: usize, order: usize, jets: &[Jet<T>]) -> Self {
        let n = MonomialBasis::get(nvars, order).len();
        let rows: Vec<Vec<T>> = jets
            .iter()
            .map(|j| {
                assert_eq!((j.nvars(), j.order()), (nvars, order));
                j.coefficients().to_vec()
            })
            .collect();
        let reduced = if rows.is_empty() { Vec::new() } else { Matrix::from_rows(rows).row_space_basis() };
        Self { nvars, order, basis: Matrix::from_columns(n, &reduced) }
    }

    pub fn zero(nvars: usize, order: usize) -> Self {
        Self::span(nvars, order, &[])
    }

    /// The image of `m^degree` in `J_order`.
    pub fn power_of_maximal(nvars: usize, order: usize, degree: usize) -> Self {
        let basis = MonomialBasis::get(nvars, order);
        let first = if degree == 0 { 0 } else { basis.prefix_len(degree - 1) };
        let jets: Vec<Jet<T>> = (first..basis.len())
            .map(|i| {
                let mut c = vec![T::zero(); basis.len()];
                c[i] = T::one();
                Jet::from_coefficients(nvars, order, c)
            })
            .collect();
        Self::span(nvars, order, &jets)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Basis matrix with jets as columns.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn basis_jets(&self) -> Vec<Jet<T>> {
        self.basis.columns().into_iter().map(|c| Jet::from_coefficients(self.nvars, self.order, c)).collect()
    }

    pub fn contains(&self, jet: &Jet<T>) -> bool {
        if jet.is_zero() {
            return true;
        }
        self.dim() > 0 && self.basis.solve(jet.coefficients()).is_some()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut jets = self.basis_jets();
        jets.extend(other.basis_jets());
        Self::span(self.nvars, self.order, &jets)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis_jets().iter().all(|j| other.contains(j))
    }
}

/// Image of the ideal `(f)` in `J_k`: the span of `f·m` truncated, over monomials `m`.
pub fn principal_subspace<T: Scalar>(f: &Jet<T>, k: usize) -> Result<JetSubspace<T>, JetError> {
    if f.is_zero() {
        return Err(JetError::ZeroJet);
    }
    let fk = f.truncate(k);
    let basis = MonomialBasis::get(f.nvars(), k);
    let jets: Vec<Jet<T>> = basis.monomials().iter().map(|m| fk.shift(m)).collect();
    Ok(JetSubspace::span(f.nvars(), k, &jets))
}
