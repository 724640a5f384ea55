//! Right-mover point-split quantities under a conformal map `v ↦ V(v)`, and
//! the right-hand side of the spatial quantum inequality.
//!
//! Two orders of limits are provided. [`delta_flanagan`] takes `v̄ → v` with
//! no cutoff; [`delta_tau`] sets `v̄ = v` first and keeps `τ`. They differ
//! whenever `V″ ≠ 0`, even where `V′ = 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exprlang::{parse, Expression, Jet3};
use crate::numerics::{c64, try_integrate_interval, ComplexValue, QuadratureSpec};
use crate::regulator::DensityResult;

/// Below this separation `V(v) − V(v̄)` is taken from the Taylor jet at `v`.
const COMPENSATION_RADIUS: f64 = 1e-4;

/// A conformal map `V(v)`. `V′` is required to be nonzero wherever it is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    pub expr: Expression,
}

impl ConformalMap {
    pub fn new(expr: Expression) -> Self {
        ConformalMap { expr }
    }

    /// Parses `text` as an expression in `v`.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(ConformalMap::new(parse(text, "v")?))
    }

    /// `(V, V′, V″, V‴)` at `v`; fails with [`Error::DegenerateMap`] if `V′(v) = 0`.
    pub fn jet(&self, v: f64) -> Result<Jet3> {
        let j = self.expr.eval_jet3(v)?;
        if j.d1 == 0.0 {
            return Err(Error::DegenerateMap { v });
        }
        Ok(j)
    }
}

/// A positive weight `ρ(x)` integrated over `[x_lo, x_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    pub expr: Expression,
    pub support: (f64, f64),
}

impl WeightFunction {
    pub fn new(expr: Expression, x_lo: f64, x_hi: f64) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(Error::InvalidParameter(format!(
                "support must be a finite interval lo < hi, got [{x_lo}, {x_hi}]"
            )));
        }
        Ok(WeightFunction {
            expr,
            support: (x_lo, x_hi),
        })
    }

    /// Parses `text` as an expression in `x`.
    pub fn parse(text: &str, x_lo: f64, x_hi: f64) -> Result<Self> {
        WeightFunction::new(parse(text, "x")?, x_lo, x_hi)
    }
}

fn singular(what: &str, v: f64, vbar: f64, tau: f64) -> Error {
    Error::SingularRegulator(format!("{what} vanishes at v = {v}, vbar = {vbar}, tau = {tau}"))
}

/// Vacuum `⟨T_vv⟩ = −1/(4π((v − v̄) − iτ)²)`.
pub fn vacuum_tvv(v: f64, vbar: f64, tau: f64) -> Result<ComplexValue> {
    let z = c64(v - vbar, -tau);
    if z.norm() == 0.0 {
        return Err(singular("(v - vbar) - i tau", v, vbar, tau));
    }
    Ok(-(z * z).inv() / (4.0 * PI))
}

/// `V(v) − V(v̄)`, from the third-order Taylor form when the points are close.
fn map_difference(map: &ConformalMap, jv: &Jet3, v: f64, vbar: f64) -> Result<f64> {
    let h = vbar - v;
    if h.abs() < COMPENSATION_RADIUS {
        Ok(-h * (jv.d1 + h * (jv.d2 / 2.0 + h * jv.d3 / 6.0)))
    } else {
        Ok(jv.f - map.jet(vbar)?.f)
    }
}

/// `Δ(v, v̄; τ) = (1/4π){V′(v)V′(v̄)/([V(v) − V(v̄)] − iτ)² − 1/([v − v̄] − iτ)²}`.
pub fn delta_pointsplit(map: &ConformalMap, v: f64, vbar: f64, tau: f64) -> Result<ComplexValue> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidCutoff(tau));
    }
    let jv = map.jet(v)?;
    let jb = map.jet(vbar)?;
    let mapped = c64(map_difference(map, &jv, v, vbar)?, -tau);
    let plain = c64(v - vbar, -tau);
    if mapped.norm() == 0.0 {
        return Err(singular("V(v) - V(vbar) - i tau", v, vbar, tau));
    }
    if plain.norm() == 0.0 {
        return Err(singular("(v - vbar) - i tau", v, vbar, tau));
    }
    let value = (mapped * mapped).inv() * (jv.d1 * jb.d1) - (plain * plain).inv();
    Ok(value / (4.0 * PI))
}

/// `Δ(v) = (1/4π)[V‴/6V′ − V″²/4V′²]`, evaluated as `(2V‴V′ − 3V″²)/(48π V′²)`.
pub fn delta_flanagan(map: &ConformalMap, v: f64) -> Result<f64> {
    let j = map.jet(v)?;
    Ok((2.0 * j.d3 * j.d1 - 3.0 * j.d2 * j.d2) / (48.0 * PI * j.d1 * j.d1))
}

/// `Δ(v; τ) = −(V′(v)² − 1)/(4πτ²)`: coincidence first, cutoff kept.
pub fn delta_tau(map: &ConformalMap, v: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidCutoff(tau));
    }
    let j = map.jet(v)?;
    Ok(-(j.d1 * j.d1 - 1.0) / (4.0 * PI * tau * tau) + 0.0)
}

/// `−(1/24π)∫ρ′(x)²/ρ(x) dx` over the support of `ρ`.
///
/// The error estimate includes `max(ρ′²/ρ at the endpoints)·(hi − lo)` as a
/// bound on what the truncated support leaves out.
pub fn qi_bound_rhs(rho: &WeightFunction, spec: &QuadratureSpec) -> Result<DensityResult> {
    let integrand = |x: f64| -> Result<f64> {
        let j = rho.expr.eval_jet3(x)?;
        if !(j.f > 0.0) {
            return Err(Error::NonpositiveWeight { x, value: j.f });
        }
        Ok(j.d1 * j.d1 / j.f)
    };
    let (lo, hi) = rho.support;
    let edge = integrand(lo)?.max(integrand(hi)?);
    let q = try_integrate_interval(|x| Ok(c64(integrand(x)?, 0.0)), lo, hi, spec)?;
    let scale = 1.0 / (24.0 * PI);
    Ok(DensityResult {
        // + 0.0 turns a −0 from ρ′ ≡ 0 into +0
        value: -scale * q.value.re + 0.0,
        error_estimate: scale * (q.error_estimate + edge * (hi - lo)),
        regulator: None,
    })
}
