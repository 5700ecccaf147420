use std::fmt;

use num_traits::Zero;

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::semilinear::Sidedness;
use crate::{QGerm, QJet, QPoly, SemilinearSet};

use super::jet::{jet_of, Jet, MonomialBasis};
use super::tangency::tangency_set;
use super::{substitution_matrix, JetError};

/// Length of `O / (f, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Colength {
    Finite(usize),
    /// No stabilization up to the cap: the germs share a component.
    Infinite,
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{n}"),
            Colength::Infinite => write!(f, "∞"),
        }
    }
}

/// Stabilization cap `2·deg f·deg g + 4`.
pub fn colength_cap(deg_f: usize, deg_g: usize) -> usize {
    2 * deg_f * deg_g + 4
}

/// `c_K = dim J_K / image of (f, g)` for increasing `K`; two equal consecutive
/// values give `m^K ⊆ (f, g)` by Nakayama, so the value is final. Both jets
/// must have order at least `cap`.
pub fn colength_of_jets<T: Scalar>(f: &Jet<T>, g: &Jet<T>, cap: usize) -> Colength {
    assert!(f.order() >= cap && g.order() >= cap);
    let d = f.nvars();
    let mut previous = None;
    for k in 0..=cap {
        let basis = MonomialBasis::get(d, k);
        let (fk, gk) = (f.truncate(k), g.truncate(k));
        let gens: Vec<Vec<T>> = basis
            .monomials()
            .iter()
            .flat_map(|m| [fk.shift(m).into_coefficients(), gk.shift(m).into_coefficients()])
            .collect();
        let c = basis.len() - Matrix::from_rows(gens).rank();
        if previous == Some(c) {
            return Colength::Finite(c);
        }
        previous = Some(c);
    }
    Colength::Infinite
}

/// Intersection multiplicity of two plane curve germs through the origin.
pub fn colength(f: &QPoly, g: &QPoly) -> Result<Colength, JetError> {
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(JetError::Dimension);
    }
    for h in [f, g] {
        if h.is_zero() {
            return Err(JetError::ZeroJet);
        }
        if !h.coefficient(&[0, 0]).is_zero() {
            return Err(JetError::NotThroughOrigin);
        }
    }
    let cap = colength_cap(f.degree() as usize, g.degree() as usize);
    Ok(colength_of_jets(&jet_of(f, cap), &jet_of(g, cap), cap))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArnoldReport {
    /// One more than the first order at which the tangency chain reaches its limit.
    pub k: usize,
    /// `B_k = {n : f_Z ∘ φⁿ ∈ (f_Y) + m^(k+1)}` for `k = 0..`.
    pub chain: Vec<SemilinearSet>,
    /// `{n : colength(f_Y, f_Z ∘ φⁿ) = ∞}`.
    pub degenerate_set: SemilinearSet,
    pub window: i64,
    /// Colength for every `|n| <= window`, in increasing `n`.
    pub multiplicities: Vec<(i64, Colength)>,
    pub max_mult: usize,
    /// `length O / m^K`.
    pub bound: usize,
}

/// Intersection multiplicities of `Y` with `φⁿ(Z)` over `|n| <= h`, and the
/// uniform bound coming from the stabilized tangency chain.
pub fn arnold_scan(phi: &QGerm, f_y: &QPoly, f_z: &QPoly, h: i64, order_cap: usize) -> Result<ArnoldReport, JetError> {
    if phi.nvars() != 2 {
        return Err(JetError::Dimension);
    }
    let cap = colength_cap(f_y.degree() as usize, f_z.degree() as usize);
    let s = substitution_matrix(phi, cap);
    let s_inv = s.inverse().expect("invertible");
    let fy = jet_of(f_y, cap);
    let mut forward = jet_of(f_z, cap).into_coefficients();
    let mut backward = forward.clone();
    let mut by_n = std::collections::BTreeMap::new();
    by_n.insert(0, colength_of_jets(&fy, &QJet::from_coefficients(2, cap, forward.clone()), cap));
    for n in 1..=h {
        forward = s.mul_vec(&forward);
        backward = s_inv.mul_vec(&backward);
        by_n.insert(n, colength_of_jets(&fy, &QJet::from_coefficients(2, cap, forward.clone()), cap));
        by_n.insert(-n, colength_of_jets(&fy, &QJet::from_coefficients(2, cap, backward.clone()), cap));
    }
    let multiplicities: Vec<(i64, Colength)> = by_n.into_iter().collect();
    let infinite: Vec<i64> = multiplicities.iter().filter(|(_, c)| *c == Colength::Infinite).map(|(n, _)| *n).collect();

    let mut chain = Vec::new();
    for k in 0..=order_cap {
        let b = tangency_set(phi, f_y, f_z, k)?;
        // Tangency sets decrease with k, so an empty set is final.
        if b.is_empty() {
            chain.resize(order_cap + 1, b);
            break;
        }
        chain.push(b);
    }
    let last = chain.last().unwrap();
    let limit = SemilinearSet::new(
        Sidedness::TwoSided,
        last.exceptional().iter().copied().filter(|e| infinite.contains(e)).collect(),
        last.progressions().to_vec(),
    )?;
    let Some(first) = chain.iter().position(|b| *b == limit) else {
        return Err(JetError::OrderCapExceeded(order_cap));
    };
    let k = first + 1;
    let window_infinite: Vec<i64> = limit.members_in(-h, h);
    if window_infinite != infinite {
        return Err(JetError::VerificationFailed(format!(
            "degenerate iterates in the window {infinite:?} differ from the tangency limit {limit}"
        )));
    }
    let max_mult = multiplicities
        .iter()
        .filter_map(|(_, c)| match c {
            Colength::Finite(v) => Some(*v),
            Colength::Infinite => None,
        })
        .max()
        .unwrap_or(0);
    let bound = MonomialBasis::get(2, k - 1).len();
    if max_mult > bound {
        return Err(JetError::VerificationFailed(format!("multiplicity {max_mult} exceeds the bound {bound}")));
    }
    Ok(ArnoldReport { k, chain, degenerate_set: limit, window: h, multiplicities, max_mult, bound })
}
