use proptest::prelude::*;
use regulab::time_step::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bogoliubov_identities(k in -50.0f64..50.0, m in 0.01f64..5.0, lambda in 0.0f64..20.0) {
        let cfg = StepConfig::new(lambda, m).unwrap();
        let p = bogoliubov(&cfg, k).unwrap();
        let w = k.hypot(m);
        let e = (w * w + lambda).sqrt();
        prop_assert!((p.a_k + p.b_k - 1.0).abs() <= 1e-15);
        prop_assert!((p.b_k * p.b_k - p.a_k * p.a_k - w / e).abs() <= 1e-15);
    }

    #[test]
    fn mode_function_continuous_at_step(k in -50.0f64..50.0, m in 0.01f64..5.0, lambda in 0.0f64..20.0) {
        let cfg = StepConfig::new(lambda, m).unwrap();
        let w = k.hypot(m);
        let t = f64::MIN_POSITIVE;
        prop_assert!((s_k(&cfg, k, -t).unwrap() - s_k(&cfg, k, t).unwrap()).norm() <= 1e-13);
        let jump = (s_k_dot(&cfg, k, -t).unwrap() - s_k_dot(&cfg, k, t).unwrap()).norm();
        prop_assert!(jump <= 1e-13 * w.max(1.0), "{jump}");
    }

    #[test]
    fn mode_energy_change_nonnegative(k in -50.0f64..50.0, m in 0.01f64..5.0, lambda in 0.0f64..20.0, t in 0.0f64..10.0) {
        let cfg = StepConfig::new(lambda, m).unwrap();
        prop_assert!(mode_delta_xi(&cfg, k, t).unwrap() >= 0.0);
    }

    #[test]
    fn d_term_real_part_ignores_cutoff_sign(e0 in 0.0f64..1.0, e1 in 0.0f64..1.0, tau in 0.001f64..1.0) {
        let cfg = StepConfig::new(1.0, 1.0).unwrap();
        let plus = Regulator { eps0: e0, eps1: e1, tau };
        let minus = Regulator { eps0: e0, eps1: e1, tau: -tau };
        let (a, b) = (d_term(&cfg, &plus).unwrap(), d_term(&cfg, &minus).unwrap());
        prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300), "{a} vs {b}");
    }
}

#[test]
fn mode_density_nonnegative_over_time() {
    let cfg = StepConfig::new(1.0, 1.0).unwrap();
    let spec = regulab::QuadratureSpec::default();
    for t in [0.01, 0.1, 0.5, 1.0, 3.0] {
        assert!(mode_reg_density(&cfg, t, &spec).unwrap().value >= 0.0);
    }
}

#[test]
fn massive_r_integral_approaches_d_term() {
    // The ω → |k| replacement only matters at small k, so the gap shrinks with the cutoff.
    let cfg = StepConfig::new(1.0, 1.0).unwrap();
    let spec = regulab::QuadratureSpec::default();
    let mut last = f64::INFINITY;
    for s in [0.2f64, 0.1, 0.05] {
        let reg = Regulator::new(s, 0.5 * s, s * s).unwrap();
        let gap = (r_integral_massive(&cfg, &reg, &spec).unwrap().value - d_term(&cfg, &reg).unwrap()).abs();
        assert!(gap < last, "{s}: {gap}");
        last = gap;
    }
}
