//! Cutoff-weighted quadrature and limit classification.
//!
//! Complex values are [`num_complex::Complex64`]; every integrand in the crate
//! is evaluated as a complex number even when the physics is real, so the
//! same machinery serves the closed-form checks of `1/((v-v̄)-iτ)²` and the
//! real energy densities.

mod gauss_kronrod;
mod limits;
mod quadrature;

pub use limits::{classify_limit, extrapolate_to_zero, LimitKind, LimitOutcome};
pub use quadrature::{
    integrate_halfline, integrate_interval, integrate_realline, try_integrate_interval,
    QuadratureResult, QuadratureSpec,
};

pub type ComplexValue = num_complex::Complex64;

/// `re + i·im`.
#[inline]
pub fn c64(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}
