//! Exact computation of dynamical return sets.
//!
//! The crate answers questions of the form "for which integers `n` does the
//! `n`-th iterate land in a target?" and always answers with a
//! [`SemilinearSet`]: a finite set plus finitely many arithmetic progressions.
//!
//! * [`semilinear`] implements the set algebra.
//! * [`padic`] carries the `p`-adic analytic interpolation `r -> M^(N r)` and
//!   Strassmann zero counting.
//! * [`recurrence`] solves hyperplane, point, and subspace returns for rational
//!   linear (and affine) automorphisms.
//! * [`jets`] reduces tangency questions between curve germs at a fixed point to
//!   subspace returns on finite-dimensional jet spaces.
//! * [`cli`] is the batch front end used by the `returnset` binary.
//!
//! Linear algebra and jets are generic over [`Scalar`]; the aliases below fix the
//! exact rational instantiation used by the solvers.

pub mod cli;
pub mod jets;
pub mod linalg;
pub mod padic;
pub mod recurrence;
pub mod scalar;
pub mod semilinear;

pub use scalar::Scalar;
pub use semilinear::{SemilinearSet, Sidedness};

pub type Rational = num_rational::BigRational;
pub type QMatrix = linalg::Matrix<Rational>;
pub type QPoly = jets::Poly<Rational>;
pub type QJet = jets::Jet<Rational>;
pub type QGerm = jets::GermAutomorphism<Rational>;
pub type F64Matrix = linalg::Matrix<f64>;
pub type F64Jet = jets::Jet<f64>;
