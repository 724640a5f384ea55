//! Power-law paths `(ε₀, ε₁, τ) = (c₀s^{p₀}, c₁s^{p₁}, c_τ s^{p_τ})` and the
//! `s → 0` behaviour of regulator-dependent expressions along them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::flanagan::{delta_pointsplit, ConformalMap};
use crate::numerics::{c64, classify_limit, ComplexValue, LimitOutcome};
use crate::regulator::Regulator;
use crate::static_well::{r_integral_closed, WellConfig};
use crate::time_step::{d_term, StepConfig};

/// `σ₁ = (ε₁² − ε₀²) + 2iε₀τ + τ²`.
pub fn sigma1(reg: &Regulator) -> ComplexValue {
    reg.sigma1()
}

/// `ε₁²/σ₁`.
pub fn ratio_239(reg: &Regulator) -> Result<ComplexValue> {
    let s = sigma1(reg);
    if s.norm() == 0.0 {
        return Err(Error::SingularRegulator(format!(
            "sigma1 = 0 at eps0 = {}, eps1 = {}, tau = {}",
            reg.eps0, reg.eps1, reg.tau
        )));
    }
    Ok(c64(reg.eps1 * reg.eps1, 0.0) / s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitPath {
    pub c0: f64,
    pub c1: f64,
    pub ctau: f64,
    pub p0: f64,
    pub p1: f64,
    pub ptau: f64,
}

impl LimitPath {
    pub fn new(c: [f64; 3], p: [f64; 3]) -> Result<Self> {
        if c.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "path coefficients must be finite and >= 0, got {c:?}"
            )));
        }
        if c.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidParameter("at least one path coefficient must be > 0".into()));
        }
        if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "path exponents must be finite and >= 0, got {p:?}"
            )));
        }
        Ok(LimitPath {
            c0: c[0],
            c1: c[1],
            ctau: c[2],
            p0: p[0],
            p1: p[1],
            ptau: p[2],
        })
    }

    /// Unit coefficients with the given exponents.
    pub fn powers(p0: f64, p1: f64, ptau: f64) -> Result<Self> {
        LimitPath::new([1.0; 3], [p0, p1, ptau])
    }

    pub fn eval(&self, s: f64) -> Regulator {
        Regulator {
            eps0: self.c0 * s.powf(self.p0),
            eps1: self.c1 * s.powf(self.p1),
            tau: self.ctau * s.powf(self.ptau),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExprId {
    Ratio239,
    RStatic317,
    DTerm616,
    FlanaganDelta,
}

impl ExprId {
    pub const ALL: [ExprId; 4] = [
        ExprId::Ratio239,
        ExprId::RStatic317,
        ExprId::DTerm616,
        ExprId::FlanaganDelta,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExprId::Ratio239 => "ratio239",
            ExprId::RStatic317 => "rstatic317",
            ExprId::DTerm616 => "dterm616",
            ExprId::FlanaganDelta => "flanagan-delta",
        }
    }
}

impl fmt::Display for ExprId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExprId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExprId::ALL
            .iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown expression id '{s}' (expected one of ratio239, rstatic317, dterm616, flanagan-delta)"
                ))
            })
    }
}

/// A regulator-dependent quantity whose `s → 0` limit is examined.
#[derive(Debug, Clone, PartialEq)]
pub enum AmbiguityExpr {
    /// `ε₁²/σ₁`.
    Ratio239,
    /// Closed-form cutoff integral of `R_ω` for a square well of half-width 1.
    RStatic317 { lambda: f64 },
    /// The step-potential D-term.
    DTerm616 { lambda: f64 },
    /// `Δ(v, v̄; τ)` with `v − v̄ = ε₁ − ε₀`.
    FlanaganDelta { map: ConformalMap, v: f64 },
}

impl AmbiguityExpr {
    pub fn id(&self) -> ExprId {
        match self {
            AmbiguityExpr::Ratio239 => ExprId::Ratio239,
            AmbiguityExpr::RStatic317 { .. } => ExprId::RStatic317,
            AmbiguityExpr::DTerm616 { .. } => ExprId::DTerm616,
            AmbiguityExpr::FlanaganDelta { .. } => ExprId::FlanaganDelta,
        }
    }

    pub fn eval(&self, reg: &Regulator) -> Result<ComplexValue> {
        match self {
            AmbiguityExpr::Ratio239 => ratio_239(reg),
            AmbiguityExpr::RStatic317 { lambda } => {
                let cfg = WellConfig { lambda: *lambda, a: 1.0 };
                Ok(c64(r_integral_closed(&cfg, reg)?, 0.0))
            }
            AmbiguityExpr::DTerm616 { lambda } => {
                let cfg = StepConfig { lambda: *lambda, m: 0.0 };
                Ok(c64(d_term(&cfg, reg)?, 0.0))
            }
            AmbiguityExpr::FlanaganDelta { map, v } => {
                let vbar = v - (reg.eps1 - reg.eps0);
                delta_pointsplit(map, *v, vbar, reg.tau)
            }
        }
    }
}

/// One evaluation along a path; `value` is `None` where the expression is singular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub s: f64,
    pub regulator: Regulator,
    pub value: Option<ComplexValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathScan {
    pub outcome: LimitOutcome,
    pub samples: Vec<PathSample>,
}

/// `s = 0.1·2^{−j}`, `j = 0..10`.
pub fn default_schedule() -> Vec<f64> {
    (0..10).map(|j| 0.1 * 0.5f64.powi(j)).collect()
}

/// Evaluates `expr` along `path` and classifies the limit.
///
/// A singular regulator on the path is not skipped: the scan reports
/// `Divergent` with zero confidence.
pub fn scan_path(expr: &AmbiguityExpr, path: &LimitPath, s_values: &[f64]) -> Result<PathScan> {
    if s_values.len() < 4 {
        return Err(Error::TooFewSamples {
            needed: 4,
            got: s_values.len(),
        });
    }
    if s_values.iter().any(|&s| !(s > 0.0 && s <= 1.0))
        || s_values.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(Error::BadSchedule);
    }

    let mut samples = Vec::with_capacity(s_values.len());
    let mut singular = false;
    for &s in s_values {
        let regulator = path.eval(s);
        let value = match expr.eval(&regulator) {
            Ok(v) => Some(v),
            Err(Error::SingularRegulator(_)) => {
                singular = true;
                None
            }
            Err(e) => return Err(e),
        };
        samples.push(PathSample { s, regulator, value });
    }

    let outcome = if singular {
        LimitOutcome::divergent(0.0)
    } else {
        let pts: Vec<(f64, ComplexValue)> = samples
            .iter()
            .map(|p| (p.s, p.value.unwrap_or_default()))
            .collect();
        classify_limit(&pts)?
    };
    Ok(PathScan { outcome, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::LimitKind;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma1(&Regulator::new(0.0, 0.0, 0.3).unwrap()), c64(0.09, 0.0));
        assert_eq!(sigma1(&Regulator::new(0.2, 0.2, 0.0).unwrap()), c64(0.0, 0.0));
        let s = sigma1(&Regulator::new(0.1, 0.2, 0.05).unwrap());
        assert!((s - c64(0.0325, 0.01)).norm() < 1e-17);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_239(&Regulator::new(0.0, 0.3, 0.0).unwrap()).unwrap(), c64(1.0, 0.0));
        assert_eq!(ratio_239(&Regulator::new(0.2, 0.0, 0.1).unwrap()).unwrap(), c64(0.0, 0.0));
        assert!(matches!(
            ratio_239(&Regulator::new(0.2, 0.2, 0.0).unwrap()),
            Err(Error::SingularRegulator(_))
        ));
    }

    #[test]
    fn three_regimes() {
        let s = default_schedule();
        let slow_tau = scan_path(&AmbiguityExpr::Ratio239, &LimitPath::powers(2.0, 2.0, 1.0).unwrap(), &s)
            .unwrap()
            .outcome;
        assert_eq!(slow_tau.kind, LimitKind::Finite);
        assert!(slow_tau.value.norm() < 1e-6);

        let slow_space = scan_path(&AmbiguityExpr::Ratio239, &LimitPath::powers(2.0, 1.0, 2.0).unwrap(), &s)
            .unwrap()
            .outcome;
        assert_eq!(slow_space.kind, LimitKind::Finite);
        assert!((slow_space.value - c64(1.0, 0.0)).norm() < 1e-6);

        let null = LimitPath::new([1.0, 1.0, 0.0], [1.0, 1.0, 1.0]).unwrap();
        let scan = scan_path(&AmbiguityExpr::Ratio239, &null, &s).unwrap();
        assert_eq!(scan.outcome.kind, LimitKind::Divergent);
        assert_eq!(scan.outcome.confidence, 0.0);
        assert!(scan.samples.iter().all(|p| p.value.is_none()));
    }

    #[test]
    fn d_term_vanishes_on_recommended_path() {
        let out = scan_path(
            &AmbiguityExpr::DTerm616 { lambda: 1.0 },
            &LimitPath::powers(2.0, 2.0, 1.0).unwrap(),
            &default_schedule(),
        )
        .unwrap()
        .outcome;
        assert_eq!(out.kind, LimitKind::Finite);
        assert!(out.value.norm() < 1e-6, "{}", out.value);
    }

    #[test]
    fn schedule_validation() {
        let p = LimitPath::powers(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            scan_path(&AmbiguityExpr::Ratio239, &p, &[0.1, 0.05, 0.01]).unwrap_err(),
            Error::TooFewSamples { needed: 4, got: 3 }
        );
        assert_eq!(
            scan_path(&AmbiguityExpr::Ratio239, &p, &[0.1, 0.2, 0.01, 0.001]).unwrap_err(),
            Error::BadSchedule
        );
    }

    #[test]
    fn path_validation() {
        assert!(LimitPath::new([0.0; 3], [1.0; 3]).is_err());
        assert!(LimitPath::new([1.0, -1.0, 1.0], [1.0; 3]).is_err());
        assert!(LimitPath::new([1.0; 3], [1.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn expr_ids_round_trip() {
        for id in ExprId::ALL {
            assert_eq!(id.name().parse::<ExprId>().unwrap(), id);
        }
        assert!("ratio240".parse::<ExprId>().is_err());
    }
}
