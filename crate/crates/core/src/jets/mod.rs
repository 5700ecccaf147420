//! Jets of plane (and higher-dimensional) germs at a fixed point, and the
//! reduction of tangency questions to subspace returns.
//!
//! `f_Z ∘ φⁿ ∈ (f_D) + m^(k+1)` is linear in `f_Z`, so on the finite-dimensional
//! jet space `J_k` it becomes "does `Sⁿ v` land in a subspace", with `S` the
//! substitution matrix of `φ`.

mod arnold;
mod germ;
mod jet;
mod poly;
mod subspace;
mod tangency;

pub use arnold::{arnold_scan, colength, colength_of_jets, colength_cap, ArnoldReport, Colength};
pub use germ::{eval_on_jets, pullback, substitution_matrix, GermAutomorphism};
pub use jet::{jet_of, monomial_label, Jet, MonomialBasis};
pub use poly::{format_monomial, parse_monomial, variable_names, Poly};
pub use subspace::{principal_subspace, JetSubspace};
pub use tangency::{
    brute_tangency_window, min_finite_order, periodic_divisor, stabilized_germ, tangency_set, tangency_set_with,
    StabilizedGerm,
};

use thiserror::Error;

use crate::recurrence::SolveError;
use crate::semilinear::SemilinearError;

/// Default bound on the jet order searched by the chain computations.
pub const DEFAULT_ORDER_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("zero jet has no principal ideal")]
    ZeroJet,
    #[error("germ does not pass through the origin")]
    NotThroughOrigin,
    #[error("linear part is not invertible")]
    NotInvertible,
    #[error("variable counts do not match")]
    Dimension,
    #[error("{0}")]
    Parse(String),
    #[error("divisor is periodic: f_D ∘ φ^{0} is proportional to f_D")]
    PeriodicDivisor(i64),
    #[error("no finite tangency set up to order {0}")]
    OrderCapExceeded(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Semilinear(#[from] SemilinearError),
}
