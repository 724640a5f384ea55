use thiserror::Error;

use crate::exprlang::ExprError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frequency cutoff must be positive, got tau = {0}")]
    InvalidCutoff(f64),

    #[error(
        "quadrature tolerance not met after {subdivisions} subdivisions \
         (error estimate {error_estimate:e}, target {target:e})"
    )]
    ToleranceNotMet {
        value_re: f64,
        value_im: f64,
        error_estimate: f64,
        target: f64,
        subdivisions: usize,
    },

    #[error("at least {needed} samples are required, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("sample schedule must be strictly decreasing and positive")]
    BadSchedule,

    #[error("regulator is singular: {0}")]
    SingularRegulator(String),

    #[error("mode frequency must be positive, got omega = {0}")]
    InvalidFrequency(f64),

    #[error("zero mode frequency (k = 0 with m = 0)")]
    ZeroFrequency,

    #[error("x outside |x|<a: split points x±eps1/2 = {x_lo}, {x_hi} with a = {a}")]
    OutsideRegionI { x_lo: f64, x_hi: f64, a: f64 },

    #[error("time split straddles the step: eps0 = {eps0} >= 2t = {two_t}")]
    SplitStraddlesStep { eps0: f64, two_t: f64 },

    #[error("degenerate map: V'({v}) = 0")]
    DegenerateMap { v: f64 },

    #[error("weight function is not positive at x = {x} (rho = {value})")]
    NonpositiveWeight { x: f64, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::ToleranceNotMet { .. })
    }
}
