use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::jet::{jet_of, Jet, MonomialBasis};
use super::poly::Poly;
use super::JetError;

/// Polynomial map germ `φ` with `φ(0) = 0` and invertible linear part.
#[derive(Clone, PartialEq)]
pub struct GermAutomorphism<T> {
    components: Vec<Poly<T>>,
}

impl<T: Scalar + std::fmt::Display> std::fmt::Debug for GermAutomorphism<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.components.iter().map(|c| c.to_string())).finish()
    }
}

impl<T: Scalar> GermAutomorphism<T> {
    pub fn new(components: Vec<Poly<T>>) -> Result<Self, JetError> {
        let d = components.len();
        if d == 0 || components.iter().any(|c| c.nvars() != d) {
            return Err(JetError::Dimension);
        }
        if components.iter().any(|c| !c.coefficient(&vec![0; d]).is_zero()) {
            return Err(JetError::NotThroughOrigin);
        }
        let germ = Self { components };
        if germ.linear_part().determinant().is_zero() {
            return Err(JetError::NotInvertible);
        }
        Ok(germ)
    }

    /// The linear germ `v ↦ M v`.
    pub fn linear(m: &Matrix<T>) -> Result<Self, JetError> {
        if !m.is_square() {
            return Err(JetError::Dimension);
        }
        let d = m.rows();
        let components = (0..d)
            .map(|i| (0..d).fold(Poly::zero(d), |acc, j| acc.add(&Poly::var(d, j).scale(&m[(i, j)]))))
            .collect();
        Self::new(components)
    }

    pub fn identity(d: usize) -> Self {
        Self { components: (0..d).map(|i| Poly::var(d, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly<T>] {
        &self.components
    }

    /// Jacobian at the origin: entry `(i, j)` is the `x_j` coefficient of `φ_i`.
    pub fn linear_part(&self) -> Matrix<T> {
        let d = self.nvars();
        let mut m = Matrix::zeros(d, d);
        for (i, c) in self.components.iter().enumerate() {
            for j in 0..d {
                let mut e = vec![0; d];
                e[j] = 1;
                m[(i, j)] = c.coefficient(&e);
            }
        }
        m
    }

    pub fn is_linear(&self) -> bool {
        self.components.iter().all(|c| c.degree() <= 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { components: self.components.iter().map(|c| c.compose(&other.components)).collect() }
    }

    pub fn component_jets(&self, order: usize) -> Vec<Jet<T>> {
        self.components.iter().map(|c| jet_of(c, order)).collect()
    }

    /// Components of `φ⁻¹` to order `order`, by the fixed point
    /// `ψ = L⁻¹ (v − (φ − L)(ψ))`, which gains one order per pass.
    pub fn inverse_jets(&self, order: usize) -> Vec<Jet<T>> {
        let d = self.nvars();
        let linv = self.linear_part().inverse().expect("invertible linear part");
        let coords: Vec<Jet<T>> = (0..d).map(|i| jet_of(&Poly::var(d, i), order)).collect();
        let higher: Vec<Poly<T>> = self
            .components
            .iter()
            .map(|c| Poly::from_terms(d, c.terms().filter(|(e, _)| e.iter().sum::<u32>() >= 2).map(|(e, c)| (e.clone(), c.clone()))))
            .collect();
        let apply_linv = |v: &[Jet<T>]| -> Vec<Jet<T>> {
            (0..d)
                .map(|i| (0..d).fold(Jet::zero(d, order), |acc, j| acc.add(&v[j].scale(&linv[(i, j)]))))
                .collect()
        };
        let mut psi = apply_linv(&coords);
        for _ in 1..order {
            let residual: Vec<Jet<T>> =
                coords.iter().zip(&higher).map(|(v, h)| v.sub(&eval_on_jets(h, &psi, order))).collect();
            psi = apply_linv(&residual);
        }
        psi
    }
}

/// `poly(subs)` computed in `J_order`.
pub fn eval_on_jets<T: Scalar>(poly: &Poly<T>, subs: &[Jet<T>], order: usize) -> Jet<T> {
    let d = subs.first().map_or(poly.nvars(), Jet::nvars);
    let mut out = Jet::zero(d, order);
    for (e, c) in poly.terms() {
        let mut term = jet_of(&Poly::constant(d, c.clone()), order);
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                term = term.mul(&subs[i]);
            }
        }
        out = out.add(&term);
    }
    out
}

/// `m ∘ φ` in `J_order` for every basis monomial `m`, in basis order.
fn monomial_images<T: Scalar>(components: &[Jet<T>], order: usize) -> Vec<Jet<T>> {
    let d = components.len();
    let basis = MonomialBasis::get(d, order);
    let mut images: Vec<Jet<T>> = Vec::with_capacity(basis.len());
    for m in basis.monomials() {
        let Some(i) = m.iter().position(|&e| e > 0) else {
            images.push(jet_of(&Poly::constant(d, T::one()), order));
            continue;
        };
        let mut prev = m.clone();
        prev[i] -= 1;
        // graded order puts m / x_i before m
        let img = images[basis.index_of(&prev).unwrap()].mul(&components[i]);
        images.push(img);
    }
    images
}

/// Matrix of `f ↦ f ∘ φ` on `J_order` in the monomial basis; `S(φ∘ψ) = S(ψ) S(φ)`.
pub fn substitution_matrix<T: Scalar>(phi: &GermAutomorphism<T>, order: usize) -> Matrix<T> {
    let images = monomial_images(&phi.component_jets(order), order);
    let columns: Vec<Vec<T>> = images.into_iter().map(Jet::into_coefficients).collect();
    Matrix::from_columns(columns.len(), &columns)
}

/// `f ∘ φ` at the order of `f`.
pub fn pullback<T: Scalar>(f: &Jet<T>, phi: &GermAutomorphism<T>) -> Jet<T> {
    let order = f.order();
    let images = monomial_images(&phi.component_jets(order), order);
    images.iter().zip(f.coefficients()).fold(Jet::zero(f.nvars(), order), |acc, (img, c)| acc.add(&img.scale(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    fn p(terms: &[(&str, &str)]) -> Poly<Rational> {
        Poly::parse_terms(2, terms.iter().copied()).unwrap()
    }

    fn rotation() -> GermAutomorphism<Rational> {
        GermAutomorphism::new(vec![p(&[("y", "-1")]), p(&[("x", "1")])]).unwrap()
    }

    #[test]
    fn pullback_examples() {
        let y = jet_of(&p(&[("y", "1")]), 2);
        assert_eq!(pullback(&y, &rotation()).to_poly(), p(&[("x", "1")]));
        let diag = GermAutomorphism::new(vec![p(&[("x", "1")]), p(&[("y", "2")])]).unwrap();
        let f = jet_of(&p(&[("y", "1"), ("x^2", "-1")]), 2);
        assert_eq!(pullback(&f, &diag).to_poly(), p(&[("y", "2"), ("x^2", "-1")]));
    }

    #[test]
    fn rejects_invalid_germs() {
        assert_eq!(GermAutomorphism::new(vec![p(&[("x", "1"), ("1", "1")]), p(&[("y", "1")])]).unwrap_err(), JetError::NotThroughOrigin);
        assert_eq!(GermAutomorphism::new(vec![p(&[("x^2", "1")]), p(&[("y", "1")])]).unwrap_err(), JetError::NotInvertible);
    }

    #[test]
    fn diagonal_substitution_matrix() {
        let diag = GermAutomorphism::new(vec![p(&[("x", "3")]), p(&[("y", "2")])]).unwrap();
        let s = substitution_matrix(&diag, 3);
        let basis = MonomialBasis::get(2, 3);
        for (i, m) in basis.monomials().iter().enumerate() {
            assert_eq!(s[(i, i)], rat(3i64.pow(m[0]) * 2i64.pow(m[1])));
        }
        assert_eq!(substitution_matrix(&GermAutomorphism::<Rational>::identity(2), 3), Matrix::identity(basis.len()));
    }

    #[test]
    fn inverse_jets_invert() {
        let phi = GermAutomorphism::new(vec![p(&[("x", "1"), ("y^2", "1")]), p(&[("y", "2"), ("x^2", "-1/3")])]).unwrap();
        let order = 5;
        let psi = phi.inverse_jets(order);
        for (i, c) in phi.components().iter().enumerate() {
            let back = eval_on_jets(c, &psi, order);
            assert_eq!(back, jet_of(&Poly::var(2, i), order));
        }
    }
}
