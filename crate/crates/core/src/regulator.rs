use crate::error::{Error, Result};
use crate::numerics::{c64, ComplexValue};

/// Point-split offsets and frequency cutoff `(ε₀, ε₁, τ)`.
///
/// The split points are `y = (t + ε₀/2, x + ε₁/2)` and `y' = (t − ε₀/2, x − ε₁/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Regulator {
    pub eps0: f64,
    pub eps1: f64,
    pub tau: f64,
}

impl Regulator {
    pub fn new(eps0: f64, eps1: f64, tau: f64) -> Result<Self> {
        for (name, v) in [("eps0", eps0), ("eps1", eps1), ("tau", tau)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(Regulator { eps0, eps1, tau })
    }

    pub fn is_zero(&self) -> bool {
        self.eps0 == 0.0 && self.eps1 == 0.0 && self.tau == 0.0
    }

    pub(crate) fn require_cutoff(&self) -> Result<()> {
        if self.tau > 0.0 && self.tau.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidCutoff(self.tau))
        }
    }

    /// `σ₁ = (ε₁² − ε₀²) + 2iε₀τ + τ²`.
    pub fn sigma1(&self) -> ComplexValue {
        let Regulator { eps0, eps1, tau } = *self;
        c64(eps1 * eps1 - eps0 * eps0 + tau * tau, 2.0 * eps0 * tau)
    }
}

/// A computed energy density with its quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityResult {
    pub value: f64,
    pub error_estimate: f64,
    /// `None` for quantities that carry no point-split regulator.
    pub regulator: Option<Regulator>,
}
