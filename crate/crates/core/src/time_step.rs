//! Potential switched on suddenly at `t = 0`: `V(t) = λθ(t)`.
//!
//! Modes are `f_k = s_k(t) e^{−ikx}/√(2ωL)` with `ω = √(k² + m²)` and, after
//! the step, `E = √(ω² + λ)`. All densities here are continuum limits: sums
//! over `k = 2πn/L` become `(L/2π)∫dk`, so per-mode quantities are reported
//! multiplied by `L`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{c64, integrate_interval, integrate_realline, ComplexValue, QuadratureSpec};
pub use crate::regulator::{DensityResult, Regulator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub lambda: f64,
    pub m: f64,
}

impl StepConfig {
    /// Requires `m ≥ 0` and `λ > −m²`, so that `E² > 0` for every `k`.
    pub fn new(lambda: f64, m: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!("mass must be finite and >= 0, got {m}")));
        }
        if !lambda.is_finite() || !(lambda > -m * m) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and > -m^2 = {}, got {lambda}",
                -m * m
            )));
        }
        Ok(StepConfig { lambda, m })
    }

    fn require_mass(&self) -> Result<()> {
        if self.m > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "mass must be > 0: the massless mode sum diverges at k = 0".into(),
            ))
        }
    }

    fn omega(&self, k: f64) -> f64 {
        k.hypot(self.m)
    }

    fn energy(&self, omega: f64) -> f64 {
        (omega * omega + self.lambda).sqrt()
    }
}

/// Coefficients of `e^{iEt}` and `e^{−iEt}` in `s_k` after the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair {
    pub a_k: f64,
    pub b_k: f64,
}

pub fn bogoliubov(cfg: &StepConfig, k: f64) -> Result<BogoliubovPair> {
    let w = cfg.omega(k);
    if w == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let r = w / cfg.energy(w);
    Ok(BogoliubovPair {
        a_k: 0.5 * (1.0 - r),
        b_k: 0.5 * (1.0 + r),
    })
}

/// `s_k(t)`: `e^{−iωt}` before the step, `A e^{iEt} + B e^{−iEt}` after.
pub fn s_k(cfg: &StepConfig, k: f64, t: f64) -> Result<ComplexValue> {
    let BogoliubovPair { a_k, b_k } = bogoliubov(cfg, k)?;
    let w = cfg.omega(k);
    if t < 0.0 {
        return Ok(c64(0.0, -w * t).exp());
    }
    let e = cfg.energy(w);
    Ok(c64(0.0, e * t).exp() * a_k + c64(0.0, -e * t).exp() * b_k)
}

/// `ds_k/dt`.
pub fn s_k_dot(cfg: &StepConfig, k: f64, t: f64) -> Result<ComplexValue> {
    let BogoliubovPair { a_k, b_k } = bogoliubov(cfg, k)?;
    let w = cfg.omega(k);
    if t < 0.0 {
        return Ok(c64(0.0, -w) * c64(0.0, -w * t).exp());
    }
    let e = cfg.energy(w);
    Ok(c64(0.0, e) * (c64(0.0, e * t).exp() * a_k - c64(0.0, -e * t).exp() * b_k))
}

/// `L·Δξ_M,k = (λ²/8ωE²)(1 − cos 2Et)`, the change in one mode's energy.
pub fn mode_delta_xi(cfg: &StepConfig, k: f64, t: f64) -> Result<f64> {
    let w = cfg.omega(k);
    if w == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    if t <= 0.0 {
        return Ok(0.0);
    }
    Ok(mode_integrand(cfg, k, t) / 8.0)
}

/// `(λ²/ωE²)(1 − cos 2Et)`, with `1 − cos` written as `2sin²` to keep small-`t` digits.
fn mode_integrand(cfg: &StepConfig, k: f64, t: f64) -> f64 {
    let w = cfg.omega(k);
    let e2 = w * w + cfg.lambda;
    let e = e2.sqrt();
    let half = (e * t).sin();
    cfg.lambda * cfg.lambda / (w * e2) * 2.0 * half * half
}

/// Mode-regularized density `(1/16π)∫ (1/ω)(λ²/E²)(1 − cos 2Et) dk`.
///
/// The integral is split at `K = 2000·max(1, 1/t)`. Beyond `K` the smooth
/// part `∫λ²/(ωE²)` is mapped onto `(0, 1]` by `k = K/u`, and the oscillating
/// part is replaced by its leading integration-by-parts term.
pub fn mode_reg_density(cfg: &StepConfig, t: f64, spec: &QuadratureSpec) -> Result<DensityResult> {
    cfg.require_mass()?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must be finite, got {t}")));
    }
    if t <= 0.0 || cfg.lambda == 0.0 {
        return Ok(DensityResult {
            value: 0.0,
            error_estimate: 0.0,
            regulator: None,
        });
    }
    let big_k = 2000.0 * (1.0 / t).max(1.0);
    let g = |k: f64| {
        let w = cfg.omega(k);
        cfg.lambda * cfg.lambda / (w * (w * w + cfg.lambda))
    };

    let spec_osc = spec.clone().with_oscillation(2.0 * t);
    let body = integrate_interval(|k| c64(mode_integrand(cfg, k, t), 0.0), 0.0, big_k, &spec_osc)?;
    let smooth_tail = integrate_interval(
        |u| {
            if u == 0.0 {
                c64(0.0, 0.0)
            } else {
                c64(g(big_k / u) * big_k / (u * u), 0.0)
            }
        },
        0.0,
        1.0,
        spec,
    )?;
    let e_k = cfg.energy(cfg.omega(big_k));
    let boundary = g(big_k) * e_k / (2.0 * t * big_k);
    let osc_tail = boundary * (2.0 * e_k * t).sin();
    let osc_remainder = boundary * 4.0 / (t * big_k);

    let integral = body.value.re + smooth_tail.value.re + osc_tail;
    Ok(DensityResult {
        value: integral / (8.0 * PI),
        error_estimate: (body.error_estimate + smooth_tail.error_estimate + osc_remainder) / (8.0 * PI),
        regulator: None,
    })
}

/// `L(ξ_λ,k − ξ_0,k)` for split points after the step.
///
/// From the mode functions,
/// `Lξ_λ,k = (1/4ω) Re{[(2ω²+λ)(A²e^{iEε₀} + B²e^{−iEε₀}) − 2λAB cos 2Et] e^{ikε₁}}`
/// and `Lξ_0,k = (ω/2) cos(kε₁ − ωε₀)`. The difference is assembled so that
/// the `O(ω)` parts cancel analytically.
pub fn xi_difference(cfg: &StepConfig, k: f64, t: f64, reg: &Regulator) -> Result<f64> {
    let w = cfg.omega(k);
    if w == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    Ok(xi_difference_unchecked(cfg, k, t, reg))
}

fn xi_difference_unchecked(cfg: &StepConfig, k: f64, t: f64, reg: &Regulator) -> f64 {
    let lambda = cfg.lambda;
    let w = cfg.omega(k);
    let e = cfg.energy(w);
    let e0 = reg.eps0;
    // u = 1 − ω/E, so A = u/2 and B = 1 − u/2
    let u = lambda / (e * (e + w));
    let a = 0.5 * u;
    let b = 1.0 - 0.5 * u;
    let c2 = 2.0 * w * w + lambda;
    let coef_a = c2 * a * a / (4.0 * w);
    let delta_b = (4.0 * lambda + c2 * (u * u - 4.0 * u)) / (16.0 * w);
    let e_minus_w = lambda / (e + w);
    let shift = c64(0.0, -0.5 * (e + w) * e0).exp() * c64(0.0, -2.0 * (0.5 * e_minus_w * e0).sin());

    let z = c64(0.0, e * e0).exp() * coef_a
        + shift * (0.5 * w)
        + c64(0.0, -e * e0).exp() * delta_b
        - c64(lambda * a * b * (2.0 * e * t).cos() / (2.0 * w), 0.0);
    (z * c64(0.0, k * reg.eps1).exp()).re
}

/// `L·R_k = −(λε₀/4) sin(kε₁ − ωε₀)`, the subtraction term in its printed form.
pub fn r_k(cfg: &StepConfig, k: f64, reg: &Regulator) -> f64 {
    -0.25 * cfg.lambda * reg.eps0 * (k * reg.eps1 - cfg.omega(k) * reg.eps0).sin()
}

/// `L·S_k = L(ξ_λ,k − ξ_0,k) − L·R_k`.
pub fn s_k_subtracted(cfg: &StepConfig, k: f64, t: f64, reg: &Regulator) -> Result<f64> {
    Ok(xi_difference(cfg, k, t, reg)? - r_k(cfg, k, reg))
}

fn check_split(t: f64, reg: &Regulator) -> Result<()> {
    if !(reg.eps0 < 2.0 * t) {
        return Err(Error::SplitStraddlesStep {
            eps0: reg.eps0,
            two_t: 2.0 * t,
        });
    }
    Ok(())
}

/// Point-split density `(1/2π)∫S_k e^{−ωτ}dk + (1/2π)∫R_k e^{−ωτ}dk`.
pub fn pointsplit_density(
    cfg: &StepConfig,
    t: f64,
    reg: &Regulator,
    spec: &QuadratureSpec,
) -> Result<DensityResult> {
    cfg.require_mass()?;
    reg.require_cutoff()?;
    check_split(t, reg)?;
    let freq = reg.eps0 + reg.eps1 + 2.0 * t;
    let spec = spec.clone().with_oscillation(freq);
    let weight = |k: f64| (-cfg.omega(k) * reg.tau).exp() / (2.0 * PI);

    let s_part = integrate_realline(
        |k| c64((xi_difference_unchecked(cfg, k, t, reg) - r_k(cfg, k, reg)) * weight(k), 0.0),
        reg.tau,
        &spec,
    )?;
    let r_part = integrate_realline(|k| c64(r_k(cfg, k, reg) * weight(k), 0.0), reg.tau, &spec)?;
    Ok(DensityResult {
        value: s_part.value.re + r_part.value.re,
        error_estimate: s_part.error_estimate + r_part.error_estimate,
        regulator: Some(*reg),
    })
}

/// `D = −(λε₀/8π)[(ε₀ − iτ)/σ₁ + (ε₀ + iτ)/σ₁*]`.
pub fn d_term(cfg: &StepConfig, reg: &Regulator) -> Result<f64> {
    if reg.eps0 == 0.0 {
        return Ok(0.0);
    }
    let sigma = reg.sigma1();
    if sigma.norm() == 0.0 {
        return Err(Error::SingularRegulator(format!(
            "sigma1 = 0 at eps0 = {}, eps1 = {}, tau = {}",
            reg.eps0, reg.eps1, reg.tau
        )));
    }
    let z = c64(reg.eps0, -reg.tau) / sigma;
    Ok(-cfg.lambda * reg.eps0 / (4.0 * PI) * z.re)
}

/// `(1/2π)∫ L·R_k e^{−|k|τ} dk` with `ω` replaced by `|k|` throughout.
///
/// This is the integral whose closed form is [`d_term`].
pub fn d_term_quadrature(cfg: &StepConfig, reg: &Regulator, spec: &QuadratureSpec) -> Result<DensityResult> {
    reg.require_cutoff()?;
    let spec = spec.clone().with_oscillation(reg.eps0 + reg.eps1);
    let q = integrate_realline(
        |k| {
            let v = -0.25 * cfg.lambda * reg.eps0 * (k * reg.eps1 - k.abs() * reg.eps0).sin();
            c64(v * (-k.abs() * reg.tau).exp() / (2.0 * PI), 0.0)
        },
        reg.tau,
        &spec,
    )?;
    Ok(DensityResult {
        value: q.value.re,
        error_estimate: q.error_estimate,
        regulator: Some(*reg),
    })
}

/// `(1/2π)∫ L·R_k e^{−ωτ} dk` with the massive `ω`, as it enters the point-split density.
///
/// Its difference from [`d_term`] measures the `ω → |k|` replacement.
pub fn r_integral_massive(cfg: &StepConfig, reg: &Regulator, spec: &QuadratureSpec) -> Result<DensityResult> {
    reg.require_cutoff()?;
    let spec = spec.clone().with_oscillation(reg.eps0 + reg.eps1);
    let q = integrate_realline(
        |k| c64(r_k(cfg, k, reg) * (-cfg.omega(k) * reg.tau).exp() / (2.0 * PI), 0.0),
        reg.tau,
        &spec,
    )?;
    Ok(DensityResult {
        value: q.value.re,
        error_estimate: q.error_estimate,
        regulator: Some(*reg),
    })
}
