use std::f64::consts::PI;

use proptest::prelude::*;
use regulab::flanagan::*;
use regulab::numerics::{c64, extrapolate_to_zero, integrate_halfline, QuadratureSpec};

const STEPS: [f64; 5] = [0.08, 0.04, 0.02, 0.01, 0.005];

fn taylor_limit(map: &ConformalMap, v: f64) -> f64 {
    let samples: Vec<_> = STEPS
        .iter()
        .map(|&h| (h, delta_pointsplit(map, v, v + h, 0.0).unwrap()))
        .collect();
    extrapolate_to_zero(&samples).re
}

fn family() -> Vec<String> {
    vec![
        "exp(0.5*v)".into(),
        "exp(v)".into(),
        "exp(2*v)".into(),
        "v + 0.1*sin(v)".into(),
        "tanh(v)".into(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_map_has_no_delta(v in -5.0f64..5.0, vbar in -5.0f64..5.0, tau in 0.0f64..2.0) {
        prop_assume!((v - vbar).abs() > 1e-6 || tau > 0.0);
        let d = delta_pointsplit(&ConformalMap::parse("v").unwrap(), v, vbar, tau).unwrap();
        prop_assert_eq!(d, c64(0.0, 0.0));
    }

    #[test]
    fn affine_maps_cancel(alpha in prop_oneof![-5.0f64..-0.2, 0.2f64..5.0], beta in -3.0f64..3.0,
                          v in -2.0f64..2.0, h in 0.01f64..1.0) {
        let map = ConformalMap::parse(&format!("({alpha:?})*v + ({beta:?})")).unwrap();
        let d = delta_pointsplit(&map, v, v + h, 0.0).unwrap();
        prop_assert!(d.norm() <= 64.0 * f64::EPSILON / (h * h), "{d}");
        prop_assert_eq!(delta_flanagan(&map, v).unwrap(), 0.0);
    }

    #[test]
    fn taylor_limit_matches(which in 0usize..5, v in -1.0f64..1.0) {
        let map = ConformalMap::parse(&family()[which]).unwrap();
        let lim = taylor_limit(&map, v);
        let d = delta_flanagan(&map, v).unwrap();
        prop_assert!((lim - d).abs() <= 1e-7, "{}: {lim} vs {d}", family()[which]);
    }

    #[test]
    fn coincidence_equals_cutoff_form(which in 0usize..5, v in -1.0f64..1.0, tau in 1e-3f64..2.0) {
        let map = ConformalMap::parse(&family()[which]).unwrap();
        let ps = delta_pointsplit(&map, v, v, tau).unwrap();
        let dt = delta_tau(&map, v, tau).unwrap();
        prop_assert_eq!(ps.im, 0.0);
        // Both sides subtract 1/(4πτ²) from V′²/(4πτ²); rounding is relative to those terms.
        let slope = map.jet(v).unwrap().d1;
        let scale = (slope * slope + 1.0) / (4.0 * PI * tau * tau);
        prop_assert!((ps.re - dt).abs() <= 4.0 * f64::EPSILON * scale, "{} vs {dt}", ps.re);
    }

    #[test]
    fn limits_disagree_where_slope_is_one(c in prop_oneof![-2.0f64..-0.05, 0.05f64..2.0], v0 in -2.0f64..2.0,
                                          tau in 1e-3f64..2.0) {
        let map = ConformalMap::parse(&format!("v + ({c:?})*(v - ({v0:?}))^2")).unwrap();
        prop_assert_eq!(delta_tau(&map, v0, tau).unwrap(), 0.0);
        let d = delta_flanagan(&map, v0).unwrap();
        prop_assert!((d + 12.0 * c * c / (48.0 * PI)).abs() <= 1e-14);
    }

    #[test]
    fn bound_is_nonpositive(sigma in 0.3f64..3.0, shift in -1.0f64..1.0) {
        let text = format!("1/cosh_free((x - ({shift:?}))/{sigma:?})");
        let text = text.replace("1/cosh_free", "exp(-")
            .replace(&format!("/{sigma:?})"), &format!("/{sigma:?})^2)"));
        let rho = WeightFunction::parse(&text, -20.0 * sigma, 20.0 * sigma).unwrap();
        let b = qi_bound_rhs(&rho, &QuadratureSpec::default()).unwrap();
        prop_assert!(b.value <= 0.0);
    }
}

#[test]
fn vacuum_matches_quadrature_grid() {
    for dv in [0.1, 0.4, 0.7, 1.0] {
        for tau in [0.05, 0.2, 0.35, 0.5] {
            let spec = QuadratureSpec::default().with_oscillation(dv);
            let q = integrate_halfline(|w| c64(0.0, -w * dv).exp() * w, tau, &spec).unwrap();
            let closed = vacuum_tvv(dv, 0.0, tau).unwrap();
            assert!((q.value / (4.0 * PI) - closed).norm() <= 1e-8 * closed.norm(), "{dv} {tau}");
        }
    }
}

#[test]
fn gaussian_bound_scales_with_width() {
    let spec = QuadratureSpec::default();
    let wide = qi_bound_rhs(&WeightFunction::parse("exp(-(x/2)^2)/(2*sqrt(pi))", -30.0, 30.0).unwrap(), &spec).unwrap();
    let narrow = qi_bound_rhs(&WeightFunction::parse("exp(-x^2)/sqrt(pi)", -15.0, 15.0).unwrap(), &spec).unwrap();
    assert!((wide.value + 1.0 / (48.0 * PI)).abs() < 1e-8);
    assert!((narrow.value / wide.value - 4.0).abs() < 4e-8);
}
