//! Square well `λ` on `|x| < a`: mode amplitudes and the renormalized
//! point-split kinetic energy density inside the well.
//!
//! Inside the well the modes are built from the entire functions
//! `C(s, x) = cos(√s x)` and `Sc(s, x) = sin(√s x)/√s` with `s = ω² − λ`.
//! Both are real for either sign of `s`, which is how frequencies below the
//! barrier (`ω² < λ`) are handled: the trigonometric functions continue to
//! hyperbolic ones without any special casing in the callers.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::{c64, integrate_halfline, QuadratureSpec};
pub use crate::regulator::{DensityResult, Regulator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig {
    pub lambda: f64,
    pub a: f64,
}

impl WellConfig {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("a must be finite and > 0, got {a}")));
        }
        Ok(WellConfig { lambda, a })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `j = 1`, even in `x`.
    Symmetric,
    /// `j = 2`, odd in `x`.
    Antisymmetric,
}

impl Parity {
    pub fn index(&self) -> u8 {
        match self {
            Parity::Symmetric => 1,
            Parity::Antisymmetric => 2,
        }
    }
}

/// `cos(√s x)`, continued to `cosh(√(−s) x)` for `s < 0`.
pub fn c_fn(s: f64, x: f64) -> f64 {
    if s > 0.0 {
        (s.sqrt() * x).cos()
    } else if s < 0.0 {
        ((-s).sqrt() * x).cosh()
    } else {
        1.0
    }
}

/// `sin(√s x)/√s`, continued to `sinh(√(−s) x)/√(−s)` for `s < 0` and to `x` at `s = 0`.
pub fn sc_fn(s: f64, x: f64) -> f64 {
    let r = s.abs().sqrt();
    if r * x.abs() < 1e-8 {
        return x * (1.0 - s * x * x / 6.0);
    }
    if s > 0.0 {
        (r * x).sin() / r
    } else {
        (r * x).sinh() / r
    }
}

/// Amplitude and phase of one well eigenmode.
///
/// Outside the well the mode is `cos(ω|x| + δ)` or `sin(ωx + δ sgn x)`, up to
/// the sign `amp_sign`. Inside it is `√norm_sq · C(s, x)` for the symmetric
/// mode and `√norm_sq · Sc(s, x)` for the antisymmetric one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    pub parity: Parity,
    pub omega: f64,
    /// `A²` in the convention where the interior mode is `A cos(x√(ω²−λ))`
    /// or `A sin(x√(ω²−λ))`. For the antisymmetric mode below the barrier
    /// this is negative (`A` is imaginary) and it is infinite at `ω² = λ`.
    pub amp_sq: f64,
    /// `δ` reduced to `(−π/2, π/2]`.
    pub phase: f64,
    /// `±1`; the sign absorbed when `δ` was reduced by an odd multiple of π.
    pub amp_sign: f64,
    /// Squared coefficient of the real interior basis function; always positive.
    pub norm_sq: f64,
    lambda: f64,
    a: f64,
}

impl ModeSolution {
    fn s(&self) -> f64 {
        self.omega * self.omega - self.lambda
    }

    /// `(χ, dχ/dx)` from the interior form, at any `x`.
    pub fn interior(&self, x: f64) -> (f64, f64) {
        let s = self.s();
        let amp = self.norm_sq.sqrt();
        match self.parity {
            Parity::Symmetric => (amp * c_fn(s, x), -amp * s * sc_fn(s, x)),
            Parity::Antisymmetric => (amp * sc_fn(s, x), amp * c_fn(s, x)),
        }
    }

    /// `(χ, dχ/dx)` from the exterior form, at any `x ≠ 0`.
    pub fn exterior(&self, x: f64) -> (f64, f64) {
        let (w, d, sign) = (self.omega, self.phase, self.amp_sign);
        match self.parity {
            Parity::Symmetric => {
                let arg = w * x.abs() + d;
                (sign * arg.cos(), -sign * w * x.signum() * arg.sin())
            }
            Parity::Antisymmetric => {
                let arg = w * x + d * x.signum();
                (sign * arg.sin(), sign * w * arg.cos())
            }
        }
    }

    fn pick(&self, x: f64) -> (f64, f64) {
        if x.abs() < self.a {
            self.interior(x)
        } else {
            self.exterior(x)
        }
    }

    /// `χ(x)` on the whole line.
    pub fn chi(&self, x: f64) -> f64 {
        self.pick(x).0
    }

    /// `dχ/dx` on the whole line.
    pub fn chi_prime(&self, x: f64) -> f64 {
        self.pick(x).1
    }
}

/// Reduces `δ` into `(−π/2, π/2]`, returning the sign picked up.
fn reduce_phase(delta: f64) -> (f64, f64) {
    let n = ((delta - FRAC_PI_2) / PI).ceil();
    let reduced = delta - n * PI;
    let sign = if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (reduced, sign)
}

/// Matches the interior solution to the free one at `x = a`.
pub fn mode_solution(cfg: &WellConfig, parity: Parity, omega: f64) -> Result<ModeSolution> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidFrequency(omega));
    }
    let (lambda, a) = (cfg.lambda, cfg.a);
    let s = omega * omega - lambda;
    let (ca, sa) = (c_fn(s, a), sc_fn(s, a));
    let w2 = omega * omega;

    let (norm_sq, amp_sq, arg) = match parity {
        Parity::Symmetric => {
            // A C_a = cos(ωa+δ), A s Sc_a = ω sin(ωa+δ)
            let n = w2 / (w2 - lambda * s * sa * sa);
            let amp = n.sqrt();
            (n, n, (amp * s * sa / omega).atan2(amp * ca))
        }
        Parity::Antisymmetric => {
            // B Sc_a = sin(ωa+δ), B C_a = ω cos(ωa+δ)
            let n = w2 / (1.0 + lambda * sa * sa);
            (n, w2 / (w2 - lambda * ca * ca), sa.atan2(ca / omega))
        }
    };
    let (phase, amp_sign) = reduce_phase(arg - omega * a);
    Ok(ModeSolution {
        parity,
        omega,
        amp_sq,
        phase,
        amp_sign,
        norm_sq,
        lambda,
        a,
    })
}

fn check_region(cfg: &WellConfig, reg: &Regulator, x: f64) -> Result<()> {
    let (x_lo, x_hi) = (x - 0.5 * reg.eps1, x + 0.5 * reg.eps1);
    if x_lo.abs() < cfg.a && x_hi.abs() < cfg.a {
        Ok(())
    } else {
        Err(Error::OutsideRegionI { x_lo, x_hi, a: cfg.a })
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidFrequency(omega))
    }
}

/// `ξ_λ,ω(y; y')` summed over both parities, for split points inside the well.
///
/// Written so that no `1/ω` appears:
/// `(cos ωε₀/4π) ω [ (ω²C_Δ − λs P)/(ω² − λs Sc_a²) + (C_Δ + λP)/(1 + λSc_a²) ]`
/// with `P = Sc(y)Sc(y')` and `C_Δ = C(s, ε₁)`.
pub fn xi_lambda(cfg: &WellConfig, omega: f64, reg: &Regulator, x: f64, _t: f64) -> Result<f64> {
    check_omega(omega)?;
    check_region(cfg, reg, x)?;
    let (lambda, w) = (cfg.lambda, omega);
    let s = w * w - lambda;
    let sa = sc_fn(s, cfg.a);
    let p = sc_fn(s, x + 0.5 * reg.eps1) * sc_fn(s, x - 0.5 * reg.eps1);
    let cd = c_fn(s, reg.eps1);
    let sym = (w * w * cd - lambda * s * p) / (w * w - lambda * s * sa * sa);
    let anti = (cd + lambda * p) / (1.0 + lambda * sa * sa);
    Ok((w * reg.eps0).cos() / (4.0 * PI) * w * (sym + anti))
}

/// Free-field `ξ_0,ω = (cos ωε₀ / 2π) ω cos ωε₁`.
pub fn xi_free(omega: f64, reg: &Regulator) -> f64 {
    (omega * reg.eps0).cos() / (2.0 * PI) * omega * (omega * reg.eps1).cos()
}

/// `ξ_λ,ω` assembled directly from the reconstructed modes `χ_jω`:
/// `(cos ωε₀ / 4πω) Σ_j [ω² χ_j(y)χ_j(y') + χ_j'(y)χ_j'(y')]`.
///
/// An independent route to [`xi_lambda`], used as a test oracle.
pub fn xi_mode_sum(cfg: &WellConfig, omega: f64, reg: &Regulator, x: f64) -> Result<f64> {
    check_omega(omega)?;
    check_region(cfg, reg, x)?;
    let (y, yp) = (x + 0.5 * reg.eps1, x - 0.5 * reg.eps1);
    let mut sum = 0.0;
    for parity in [Parity::Symmetric, Parity::Antisymmetric] {
        let m = mode_solution(cfg, parity, omega)?;
        sum += omega * omega * m.chi(y) * m.chi(yp) + m.chi_prime(y) * m.chi_prime(yp);
    }
    Ok((omega * reg.eps0).cos() / (4.0 * PI * omega) * sum)
}

/// The two-parity density in its printed amplitude form:
/// `(cos ωε₀/4π)[(A₁²+A₂²)(ω − λ/2ω) C(s,ε₁) + (A₂²−A₁²)(λ/2ω) C(s,2x)]`.
///
/// Kept for comparison only; the sign of its second term does not follow
/// from the mode functions (see [`xi_lambda`]).
pub fn xi_lambda_displayed(cfg: &WellConfig, omega: f64, reg: &Regulator, x: f64) -> Result<f64> {
    check_omega(omega)?;
    check_region(cfg, reg, x)?;
    let w = omega;
    let s = w * w - cfg.lambda;
    let a1 = mode_solution(cfg, Parity::Symmetric, w)?.amp_sq;
    let a2 = mode_solution(cfg, Parity::Antisymmetric, w)?.amp_sq;
    let half = cfg.lambda / (2.0 * w);
    let bracket = (a1 + a2) * (w - half) * c_fn(s, reg.eps1) + (a2 - a1) * half * c_fn(s, 2.0 * x);
    Ok((w * reg.eps0).cos() / (4.0 * PI) * bracket)
}

/// Per-parity densities in their printed amplitude form, summed:
/// `(2cos ωε₀/4πω)[A₁²(ω²C_Δ − λ sin qy sin qy') + A₂²(ω²C_Δ − λ cos qy cos qy')]`.
///
/// Kept for comparison only; its prefactor is twice the one implied by the
/// mode normalization.
pub fn xi_appendix_displayed(cfg: &WellConfig, omega: f64, reg: &Regulator, x: f64) -> Result<f64> {
    check_omega(omega)?;
    check_region(cfg, reg, x)?;
    let (w, lambda) = (omega, cfg.lambda);
    let s = w * w - lambda;
    let (y, yp) = (x + 0.5 * reg.eps1, x - 0.5 * reg.eps1);
    let a1 = mode_solution(cfg, Parity::Symmetric, w)?.amp_sq;
    let a2 = mode_solution(cfg, Parity::Antisymmetric, w)?.amp_sq;
    let cd = c_fn(s, reg.eps1);
    let j1 = a1 * (w * w * cd - lambda * s * sc_fn(s, y) * sc_fn(s, yp));
    let j2 = a2 * (w * w * cd - lambda * c_fn(s, y) * c_fn(s, yp));
    Ok(2.0 * (w * reg.eps0).cos() / (4.0 * PI * w) * (j1 + j2))
}

/// `R_ω = (λ/4π) ε₁ cos(ωε₀) sin(ωε₁)`, the large-`ω` part of `ξ_λ − ξ_0`.
pub fn r_omega(cfg: &WellConfig, omega: f64, reg: &Regulator) -> f64 {
    cfg.lambda / (4.0 * PI) * reg.eps1 * (omega * reg.eps0).cos() * (omega * reg.eps1).sin()
}

/// `(ξ_λ,ω − ξ_0,ω) − R_ω`, computed from a single fused expression.
///
/// `ξ_λ − ξ_0 = (ω cos ωε₀/4π)[2(C_Δ − cos ωε₁) + λ² C(s,2a)(P − Sc_a² C_Δ)/((1+λSc_a²)(ω²−λs Sc_a²))]`,
/// with `C_Δ − cos ωε₁` evaluated as a product of sines so that the
/// `O(λ/ω)` difference between `√(ω²−λ)` and `ω` is not lost.
pub fn s_omega(cfg: &WellConfig, omega: f64, reg: &Regulator, x: f64, _t: f64) -> Result<f64> {
    check_omega(omega)?;
    check_region(cfg, reg, x)?;
    Ok(s_omega_unchecked(cfg, omega, reg, x))
}

fn s_omega_unchecked(cfg: &WellConfig, w: f64, reg: &Regulator, x: f64) -> f64 {
    let lambda = cfg.lambda;
    let e1 = reg.eps1;
    let s = w * w - lambda;
    let cd = c_fn(s, e1);

    let cos_gap = if s > 0.0 {
        let q = s.sqrt();
        let q_minus_w = -lambda / (q + w);
        -2.0 * (0.5 * (q + w) * e1).sin() * (0.5 * q_minus_w * e1).sin()
    } else {
        cd - (w * e1).cos()
    };

    let sa = sc_fn(s, cfg.a);
    let p = sc_fn(s, x + 0.5 * e1) * sc_fn(s, x - 0.5 * e1);
    let d1 = w * w - lambda * s * sa * sa;
    let d2 = 1.0 + lambda * sa * sa;
    let coupling = lambda * lambda * c_fn(s, 2.0 * cfg.a) * (p - sa * sa * cd) / (d1 * d2);

    let diff = w * (w * reg.eps0).cos() / (4.0 * PI) * (2.0 * cos_gap + coupling);
    diff - r_omega(cfg, w, reg)
}

/// `∫₀^∞ R_ω e^{−ωτ} dω = (λ/4π) Re[ε₁²/σ₁]`, exact.
pub fn r_integral_closed(cfg: &WellConfig, reg: &Regulator) -> Result<f64> {
    if reg.eps1 == 0.0 {
        return Ok(0.0);
    }
    let sigma = reg.sigma1();
    if sigma.norm() == 0.0 {
        return Err(Error::SingularRegulator(format!(
            "sigma1 = 0 at eps0 = {}, eps1 = {}, tau = {}",
            reg.eps0, reg.eps1, reg.tau
        )));
    }
    Ok(cfg.lambda / (4.0 * PI) * (c64(reg.eps1 * reg.eps1, 0.0) / sigma).re)
}

/// Renormalized kinetic energy density `∫ S_ω e^{−ωτ} dω + ∫ R_ω e^{−ωτ} dω`.
pub fn t00r_static(
    cfg: &WellConfig,
    reg: &Regulator,
    x: f64,
    _t: f64,
    spec: &QuadratureSpec,
) -> Result<DensityResult> {
    check_region(cfg, reg, x)?;
    reg.require_cutoff()?;
    let r = r_integral_closed(cfg, reg)?;
    if cfg.lambda == 0.0 {
        return Ok(DensityResult {
            value: 0.0,
            error_estimate: 0.0,
            regulator: Some(*reg),
        });
    }
    // Highest frequency in the integrand as a function of ω.
    let freq = reg.eps0 + reg.eps1 + 4.0 * cfg.a + 2.0 * x.abs();
    let spec = spec.clone().with_oscillation(freq);
    let q = integrate_halfline(
        |w| {
            if w == 0.0 {
                c64(0.0, 0.0)
            } else {
                c64(s_omega_unchecked(cfg, w, reg, x), 0.0)
            }
        },
        reg.tau,
        &spec,
    )?;
    Ok(DensityResult {
        value: q.value.re + r,
        error_estimate: q.error_estimate,
        regulator: Some(*reg),
    })
}
