// 7-point Gauss / 15-point Kronrod pair on [-1, 1].

use super::ComplexValue;

/// Kronrod abscissae, descending; the last entry is the centre.
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub(crate) struct PanelEstimate {
    pub value: ComplexValue,
    pub error: f64,
    /// The part of `error` that is the roundoff floor `50·eps·∫|f|`.
    pub floor: f64,
    pub evaluations: usize,
}

/// Applies the pair on `[a, b]`. The error is the Kronrod–Gauss difference
/// rescaled the way QUADPACK does, with a roundoff floor.
pub(crate) fn apply<F, E>(f: &F, a: f64, b: f64) -> Result<PanelEstimate, E>
where
    F: Fn(f64) -> Result<ComplexValue, E>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let mut fv1 = [ComplexValue::new(0.0, 0.0); 7];
    let mut fv2 = [ComplexValue::new(0.0, 0.0); 7];

    let f_centre = f(centre)?;
    let mut res_kronrod = f_centre * WGK[7];
    let mut res_gauss = f_centre * WG[3];
    let mut res_abs = WGK[7] * f_centre.norm();

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(centre - x)?;
        let f2 = f(centre + x)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += (f1 + f2) * WGK[j];
        res_abs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            res_gauss += (f1 + f2) * WG[j / 2];
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_centre - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_kronrod - res_gauss) * half).norm();

    if res_asc != 0.0 && error != 0.0 {
        let scale = (200.0 * error / res_asc).powf(1.5);
        error = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let mut floor = 0.0;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        floor = 50.0 * f64::EPSILON * res_abs;
        error = error.max(floor);
    }

    Ok(PanelEstimate {
        value,
        error,
        floor,
        evaluations: 15,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn integrate_poly(power: i32) -> f64 {
        let f = |x: f64| -> Result<ComplexValue, Infallible> {
            Ok(ComplexValue::new(x.powi(power), 0.0))
        };
        apply(&f, -1.0, 1.0).unwrap().value.re
    }

    #[test]
    fn kronrod_weights_sum_to_two() {
        let total: f64 = WGK[..7].iter().map(|w| 2.0 * w).sum::<f64>() + WGK[7];
        assert!((total - 2.0).abs() < 1e-15);
        let gauss: f64 = WG[..3].iter().map(|w| 2.0 * w).sum::<f64>() + WG[3];
        assert!((gauss - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials_through_degree_22() {
        for p in 0..=22 {
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!(
                (integrate_poly(p) - exact).abs() < 1e-14,
                "degree {p}: {} vs {exact}",
                integrate_poly(p)
            );
        }
    }
}
