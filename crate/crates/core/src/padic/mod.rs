//! Valuation-tracked `p`-adic arithmetic and the analytic interpolation of
//! matrix orbits.
//!
//! Only odd primes and the unramified case (coefficients in `Z_p`) are
//! supported. Every value carries an *absolute* precision `m`: the residue is
//! known modulo `p^m` and nothing more. Arithmetic never overstates precision.

mod matrix;
mod scalar;
mod series;

pub use matrix::{matrix_exp, matrix_log, PadicMatrix};
pub use scalar::{PadicScalar, Valuation};
pub use series::{
    exact_zero_test, integer_zeros, integer_zeros_within, orbit_series, strassmann_bound, IntegerZeros,
    OrbitFamily, PadicSeries, StrassmannBound, TailBound,
};

use thiserror::Error;

/// Default absolute precision in `p`-adic digits.
pub const DEFAULT_PRECISION: u32 = 32;
/// Precision is doubled on exhaustion up to this many digits.
pub const PRECISION_CAP: u32 = 512;
/// Minimum series truncation.
pub const MIN_TERMS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("matrix is not congruent to the identity modulo p")]
    BadReduction,
    #[error("prime {0} is too small; p >= 3 is required")]
    PrimeTooSmall(u64),
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("value is not p-integral")]
    NotIntegral,
    #[error("minimal coefficient valuation is not separated from the precision ceiling")]
    InsufficientPrecision,
    #[error("precision exhausted before the zeros could be isolated")]
    PrecisionExhausted,
    #[error("series vanishes to working precision; zero counting needs a finite bound")]
    NotFinite,
}

pub type Result<T> = std::result::Result<T, PadicError>;

fn check_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(PadicError::PrimeTooSmall(p));
    }
    if !crate::scalar::is_odd_prime(p) {
        return Err(PadicError::NotPrime(p));
    }
    Ok(())
}
