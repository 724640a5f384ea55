use super::ComplexValue;
use crate::error::{Error, Result};

/// Number of trailing samples used for both the growth fit and the
/// extrapolation.
const WINDOW: usize = 4;
const GROWTH_SLOPE: f64 = -0.5;
const GROWTH_RESIDUAL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitKind {
    Finite,
    Divergent,
    Indeterminate,
}

impl LimitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LimitKind::Finite => "Finite",
            LimitKind::Divergent => "Divergent",
            LimitKind::Indeterminate => "Indeterminate",
        }
    }
}

impl std::fmt::Display for LimitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOutcome {
    pub kind: LimitKind,
    /// Extrapolated limit; meaningful only for [`LimitKind::Finite`].
    pub value: ComplexValue,
    /// In `[0, 1]`.
    pub confidence: f64,
}

impl LimitOutcome {
    pub fn divergent(confidence: f64) -> Self {
        LimitOutcome {
            kind: LimitKind::Divergent,
            value: ComplexValue::new(f64::NAN, f64::NAN),
            confidence: confidence.clamp(0.0, 1.0),
        }
    }

    fn indeterminate(last: ComplexValue) -> Self {
        LimitOutcome {
            kind: LimitKind::Indeterminate,
            value: last,
            confidence: 0.0,
        }
    }
}

/// Value at `s = 0` of the polynomial through `(s_i, v_i)` (Neville's scheme).
///
/// This is Richardson extrapolation for sequences whose error is a power
/// series in `s`.
pub fn extrapolate_to_zero(samples: &[(f64, ComplexValue)]) -> ComplexValue {
    let n = samples.len();
    let mut table: Vec<ComplexValue> = samples.iter().map(|&(_, v)| v).collect();
    for level in 1..n {
        for i in 0..n - level {
            let (s_lo, s_hi) = (samples[i].0, samples[i + level].0);
            // p(0) from p_i..(i+level-1) and p_(i+1)..(i+level)
            table[i] = (table[i + 1] * s_lo - table[i] * s_hi) / (s_lo - s_hi);
        }
    }
    table[0]
}

/// Least-squares line through `(x_i, y_i)`: returns (slope, max |residual|).
fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let resid = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).abs())
        .fold(0.0, f64::max);
    (slope, resid)
}

/// Classifies the `s → 0` behaviour of a sampled sequence.
///
/// Samples must have `s` positive and strictly decreasing. The last four are
/// examined: a log-log growth slope below `-0.5` with a small fit residual
/// means `Divergent`; contracting successive differences mean `Finite`, with
/// the value extrapolated to `s = 0`; anything else is `Indeterminate`.
pub fn classify_limit(samples: &[(f64, ComplexValue)]) -> Result<LimitOutcome> {
    if samples.len() < WINDOW {
        return Err(Error::TooFewSamples {
            needed: WINDOW,
            got: samples.len(),
        });
    }
    if samples.iter().any(|&(s, _)| !(s > 0.0) || !s.is_finite())
        || samples.windows(2).any(|w| !(w[1].0 < w[0].0))
    {
        return Err(Error::BadSchedule);
    }

    let tail = &samples[samples.len() - WINDOW..];
    let last = tail[WINDOW - 1].1;

    if tail.iter().any(|(_, v)| v.re.is_nan() || v.im.is_nan()) {
        return Ok(LimitOutcome::indeterminate(last));
    }
    if tail.iter().any(|(_, v)| v.re.is_infinite() || v.im.is_infinite()) {
        return Ok(LimitOutcome::divergent(0.0));
    }

    if tail.iter().all(|(_, v)| v.norm() > 0.0) {
        let points: Vec<(f64, f64)> = tail.iter().map(|&(s, v)| (s.ln(), v.norm().ln())).collect();
        let (slope, resid) = fit_line(&points);
        if slope < GROWTH_SLOPE && resid < GROWTH_RESIDUAL {
            return Ok(LimitOutcome::divergent(1.0 - resid / GROWTH_RESIDUAL));
        }
    }

    let scale = tail.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let floor = 64.0 * f64::EPSILON * scale;
    let steps: Vec<f64> = tail.windows(2).map(|w| (w[1].1 - w[0].1).norm()).collect();

    let mut ratios = Vec::with_capacity(steps.len() - 1);
    for w in steps.windows(2) {
        if w[1] <= floor {
            continue;
        }
        if w[0] <= floor || w[1] >= w[0] {
            return Ok(LimitOutcome::indeterminate(last));
        }
        ratios.push(w[1] / w[0]);
    }

    let confidence = if ratios.is_empty() {
        1.0
    } else {
        let r_max = ratios.iter().cloned().fold(0.0, f64::max);
        let r_min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        (1.0 - r_max) * (r_min / r_max)
    };

    Ok(LimitOutcome {
        kind: LimitKind::Finite,
        value: extrapolate_to_zero(tail),
        confidence: confidence.clamp(0.0, 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;

    const S: [f64; 4] = [0.1, 0.01, 0.001, 0.0001];

    fn seq(f: impl Fn(f64) -> f64) -> Vec<(f64, ComplexValue)> {
        S.iter().map(|&s| (s, c64(f(s), 0.0))).collect()
    }

    #[test]
    fn constant_is_finite() {
        let out = classify_limit(&seq(|_| 1.0)).unwrap();
        assert_eq!(out.kind, LimitKind::Finite);
        assert_eq!(out.value.re, 1.0);
        assert_eq!(out.confidence, 1.0);
    }

    #[test]
    fn harmonic_blowup_is_divergent() {
        let out = classify_limit(&seq(|s| 1.0 / s)).unwrap();
        assert_eq!(out.kind, LimitKind::Divergent);
        assert!(out.confidence > 0.99);
    }

    #[test]
    fn quadratic_approach_extrapolates_exactly() {
        // Oracle: the exact limit of 1 + s² is 1.
        let out = classify_limit(&seq(|s| 1.0 + s * s)).unwrap();
        assert_eq!(out.kind, LimitKind::Finite);
        assert!((out.value.re - 1.0).abs() < 1e-8, "{}", out.value);
        assert!(out.confidence > 0.9);
    }

    #[test]
    fn oscillation_is_indeterminate() {
        let s: Vec<(f64, ComplexValue)> = [0.5, 0.25, 0.125, 0.0625]
            .iter()
            .zip([1.0, -1.0, 1.0, -1.0])
            .map(|(&s, v)| (s, c64(v, 0.0)))
            .collect();
        assert_eq!(classify_limit(&s).unwrap().kind, LimitKind::Indeterminate);
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(
            classify_limit(&seq(|_| 1.0)[..3]).unwrap_err(),
            Error::TooFewSamples { needed: 4, got: 3 }
        );
    }

    #[test]
    fn schedule_must_decrease() {
        let mut s = seq(|_| 1.0);
        s.swap(1, 2);
        assert_eq!(classify_limit(&s).unwrap_err(), Error::BadSchedule);
    }

    #[test]
    fn neville_reproduces_cubic() {
        let pts: Vec<(f64, ComplexValue)> = [0.4, 0.3, 0.2, 0.1]
            .iter()
            .map(|&s: &f64| (s, c64(2.0 - s + 3.0 * s.powi(3), -s * s)))
            .collect();
        let v = extrapolate_to_zero(&pts);
        assert!((v - c64(2.0, 0.0)).norm() < 1e-14);
    }
}
