use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value and first three derivatives of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub const fn new(f: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet3 { f, d1, d2, d3 }
    }

    pub const fn constant(c: f64) -> Self {
        Jet3::new(c, 0.0, 0.0, 0.0)
    }

    /// Jet of the identity map at `v`.
    pub const fn variable(v: f64) -> Self {
        Jet3::new(v, 1.0, 0.0, 0.0)
    }

    /// `h ∘ self`, given `h` and its first three derivatives at `self.f`.
    pub fn compose(self, h: [f64; 4]) -> Jet3 {
        let (g1, g2, g3) = (self.d1, self.d2, self.d3);
        Jet3 {
            f: h[0],
            d1: h[1] * g1,
            d2: h[2] * g1 * g1 + h[1] * g2,
            d3: h[3] * g1 * g1 * g1 + 3.0 * h[2] * g1 * g2 + h[1] * g3,
        }
    }

    pub fn recip(self) -> Jet3 {
        let r = 1.0 / self.f;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn exp(self) -> Jet3 {
        let e = self.f.exp();
        self.compose([e, e, e, e])
    }

    /// Requires `self.f > 0`.
    pub fn ln(self) -> Jet3 {
        let r = 1.0 / self.f;
        self.compose([self.f.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sin(self) -> Jet3 {
        let (s, c) = self.f.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Jet3 {
        let (s, c) = self.f.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tanh(self) -> Jet3 {
        let t = self.f.tanh();
        let sech2 = 1.0 - t * t;
        self.compose([t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0)])
    }

    /// `self^p` for a constant exponent. Terms whose falling-factorial
    /// coefficient vanishes are dropped, so integer powers are exact at zero.
    pub fn powf(self, p: f64) -> Jet3 {
        let x = self.f;
        let c1 = p;
        let c2 = p * (p - 1.0);
        let c3 = p * (p - 1.0) * (p - 2.0);
        let term = |c: f64, k: f64| if c == 0.0 { 0.0 } else { c * pow(x, p - k) };
        self.compose([pow(x, p), term(c1, 1.0), term(c2, 2.0), term(c3, 3.0)])
    }
}

fn pow(x: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3::new(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        Jet3::new(self.f - o.f, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3::new(-self.f, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        Jet3 {
            f: self.f * o.f,
            d1: self.d1 * o.f + self.f * o.d1,
            d2: self.d2 * o.f + 2.0 * self.d1 * o.d1 + self.f * o.d2,
            d3: self.d3 * o.f + 3.0 * self.d2 * o.d1 + 3.0 * self.d1 * o.d2 + self.f * o.d3,
        }
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet3) -> Jet3 {
        self * o.recip()
    }
}
