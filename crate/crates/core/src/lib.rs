//! Numerical laboratory for regularized vacuum energy densities of a scalar
//! field in 1+1 dimensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: cutoff-weighted adaptive quadrature and limit classification.
//! - [`exprlang`]: a small expression language with third-order jet evaluation.
//! - [`static_well`]: square-well modes and the point-split kinetic energy density.
//! - [`time_step`]: the sudden step potential, mode-sum and point-split densities.
//! - [`regulator_lab`]: limit paths for the regulator triple and their outcomes.
//! - [`flanagan`]: right-mover point-split quantities and the spatial bound.

pub mod error;
pub mod exprlang;
pub mod flanagan;
pub mod numerics;
pub mod regulator;
pub mod regulator_lab;
pub mod static_well;
pub mod time_step;

pub use error::{Error, Result};
pub use numerics::{ComplexValue, LimitKind, LimitOutcome, QuadratureResult, QuadratureSpec};
pub use regulator::{DensityResult, Regulator};
