use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::recurrence::{brute_window, reduction_order, solve_subspace_certified, LinearSystem, Solution, SolverOptions, Window};
use crate::scalar::odd_primes;
use crate::semilinear::stepsize;
use crate::{QGerm, QJet, QMatrix, QPoly, Rational, SemilinearSet};

use super::jet::jet_of;
use super::subspace::{principal_subspace, JetSubspace};
use super::{substitution_matrix, JetError};

fn check_curve(f: &QPoly, d: usize) -> Result<(), JetError> {
    if f.nvars() != d {
        return Err(JetError::Dimension);
    }
    if f.is_zero() {
        return Err(JetError::ZeroJet);
    }
    if !f.coefficient(&vec![0; d]).is_zero() {
        return Err(JetError::NotThroughOrigin);
    }
    Ok(())
}

/// The subspace return problem `Sⁿ jet_k(f_Z) ∈ W_k`.
fn tangency_problem(phi: &QGerm, f_d: &QPoly, f_z: &QPoly, k: usize) -> Result<(LinearSystem, JetSubspace<Rational>), JetError> {
    let d = phi.nvars();
    check_curve(f_d, d)?;
    check_curve(f_z, d)?;
    let s = substitution_matrix(phi, k);
    let w = principal_subspace(&jet_of(f_d, k), k).or_else(|_| Ok::<_, JetError>(JetSubspace::zero(d, k)))?;
    let sys = LinearSystem::new(s, jet_of(f_z, k).into_coefficients())?;
    Ok((sys, w))
}

pub fn tangency_set_with(phi: &QGerm, f_d: &QPoly, f_z: &QPoly, k: usize, opts: &SolverOptions) -> Result<Solution, JetError> {
    let (sys, w) = tangency_problem(phi, f_d, f_z, k)?;
    Ok(solve_subspace_certified(&sys, w.basis(), opts)?)
}

/// `A_k = {n : f_Z ∘ φⁿ ∈ (f_D) + m^(k+1)}`, i.e. `φⁿ(D^(k)) ⊆ Z`.
pub fn tangency_set(phi: &QGerm, f_d: &QPoly, f_z: &QPoly, k: usize) -> Result<SemilinearSet, JetError> {
    Ok(tangency_set_with(phi, f_d, f_z, k, &SolverOptions::default())?.set)
}

/// Exact jet containment for every `|n| <= h`.
pub fn brute_tangency_window(phi: &QGerm, f_d: &QPoly, f_z: &QPoly, k: usize, h: i64) -> Result<Window, JetError> {
    let (sys, w) = tangency_problem(phi, f_d, f_z, k)?;
    let (d, order) = (phi.nvars(), k);
    Ok(brute_window(&sys, |v| w.contains(&QJet::from_coefficients(d, order, v.to_vec())), h))
}

fn proportional(f: &[Rational], g: &[Rational]) -> bool {
    let Some(i) = f.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    let c = &g[i] / &f[i];
    f.iter().zip(g).all(|(a, b)| &(a * &c) == b)
}

/// Smallest `n >= 1`, among multiples of the moduli in the self-tangency set
/// at order `order`, with `jet(f_D ∘ φⁿ)` proportional to `jet(f_D)`.
/// Exact when `φ` is linear and `order >= deg f_D`.
pub fn periodic_divisor(phi: &QGerm, f_d: &QPoly, order: usize) -> Result<Option<i64>, JetError> {
    let order = order.max(f_d.degree() as usize);
    let self_set = tangency_set(phi, f_d, f_d, order)?;
    let Some(step) = self_set.progressions().iter().map(|p| p.modulus()).min() else {
        return Ok(None);
    };
    let s = substitution_matrix(phi, order);
    let p = odd_primes().find(|&p| reduction_order(&s, p).is_ok()).expect("primes are unbounded");
    let limit = step * reduction_order(&s, p)? as i64;
    let f = jet_of(f_d, order).into_coefficients();
    let s_step = s.pow(step as u64);
    let mut g = f.clone();
    for n in (step..=limit).step_by(step as usize) {
        g = s_step.mul_vec(&g);
        if proportional(&f, &g) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Smallest `k <= cap` with `A_k` finite.
pub fn min_finite_order(phi: &QGerm, f_d: &QPoly, f_z: &QPoly, cap: usize) -> Result<usize, JetError> {
    for k in 0..=cap {
        if tangency_set(phi, f_d, f_z, k)?.is_finite() {
            return Ok(k);
        }
    }
    match periodic_divisor(phi, f_d, cap)? {
        Some(n) => Err(JetError::PeriodicDivisor(n)),
        None => Err(JetError::OrderCapExceeded(cap)),
    }
}

/// Result of replacing `φ` by `φⁿ` so that every nonzero iterate meets `D`
/// exactly to order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizedGerm {
    pub step: i64,
    pub order: usize,
    /// `(f_D) + m^(k+1)` inside `J_(k+1)`.
    pub subspace: JetSubspace<Rational>,
    /// The self-tangency chain `A_0 ⊇ A_1 ⊇ ...` that fixed `step` and `order`.
    pub chain: Vec<SemilinearSet>,
    /// Nonzero `m` for which `(f_D) + (f_D ∘ φ^(step·m)) = (f_D) + m^(k+1)` was checked.
    pub verified: Vec<i64>,
}

/// Stepsize of the self-tangency chain of `D`, verified on `sample`.
pub fn stabilized_germ(phi: &QGerm, f_d: &QPoly, cap: usize, sample: RangeInclusive<i64>) -> Result<StabilizedGerm, JetError> {
    if phi.nvars() != 2 {
        return Err(JetError::Dimension);
    }
    let mut chain = Vec::new();
    for k in 0..=cap {
        let a = tangency_set(phi, f_d, f_d, k)?;
        let done = a.is_finite();
        chain.push(a);
        if done {
            break;
        }
    }
    if !chain.last().is_some_and(SemilinearSet::is_finite) {
        return Err(match periodic_divisor(phi, f_d, cap)? {
            Some(n) => JetError::PeriodicDivisor(n),
            None => JetError::OrderCapExceeded(cap),
        });
    }
    let (step, order) = stepsize(&chain)?;
    let outer = order + 1;
    let ideal = principal_subspace(&jet_of(f_d, outer), outer)?;
    let target = ideal.sum(&JetSubspace::power_of_maximal(2, outer, outer));
    // equality in J_(k+1) lifts to the local ring by Nakayama
    let s: QMatrix = substitution_matrix(phi, outer);
    let s_step = s.pow_signed(step).expect("invertible");
    let f = jet_of(f_d, outer);
    let mut verified = Vec::new();
    for m in sample.filter(|&m| m != 0) {
        let g = QJet::from_coefficients(2, outer, s_step.pow_signed(m).expect("invertible").mul_vec(f.coefficients()));
        let got = ideal.sum(&principal_subspace(&g, outer)?);
        if got != target {
            return Err(JetError::VerificationFailed(format!(
                "(f_D) + (f_D ∘ φ^{}) differs from (f_D) + m^{} at m = {m}",
                step * m,
                outer
            )));
        }
        verified.push(m);
    }
    Ok(StabilizedGerm { step, order, subspace: target, chain, verified })
}
