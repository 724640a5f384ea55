use proptest::prelude::*;
use regulab::numerics::{c64, integrate_halfline, QuadratureSpec};
use regulab::static_well::*;

fn draw() -> impl Strategy<Value = (WellConfig, f64, Regulator, f64)> {
    (0.0f64..6.0, 0.2f64..2.0, 0.05f64..15.0, 0.0f64..0.5, 0.0f64..0.9, -0.9f64..0.9).prop_map(
        |(lambda, a, w, e0, f1, fx)| {
            let eps1 = f1 * a;
            // keep both split points inside the well
            let room = a - 0.5 * eps1;
            let x = fx * room;
            (
                WellConfig::new(lambda, a).unwrap(),
                w,
                Regulator::new(e0, eps1, 0.0).unwrap(),
                x,
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fused_density_equals_mode_sum((cfg, w, reg, x) in draw()) {
        let fused = xi_lambda(&cfg, w, &reg, x, 0.0).unwrap();
        let oracle = xi_mode_sum(&cfg, w, &reg, x).unwrap();
        prop_assert!((fused - oracle).abs() <= 1e-12 * oracle.abs().max(1.0), "{fused} vs {oracle}");
    }

    #[test]
    fn modes_are_continuous_at_the_walls(
        lambda in 0.0f64..10.0,
        a in 0.2f64..2.0,
        w in 0.02f64..12.0,
    ) {
        let cfg = WellConfig::new(lambda, a).unwrap();
        for parity in [Parity::Symmetric, Parity::Antisymmetric] {
            let m = mode_solution(&cfg, parity, w).unwrap();
            for edge in [-a, a] {
                let (ci, di) = m.interior(edge);
                let (co, dout) = m.exterior(edge);
                prop_assert!((ci - co).abs() <= 1e-10, "{parity:?} chi at {edge}: {ci} vs {co}");
                prop_assert!((di - dout).abs() <= 1e-10 * w.max(1.0), "{parity:?} chi' at {edge}: {di} vs {dout}");
            }
            prop_assert!(m.phase > -std::f64::consts::FRAC_PI_2 && m.phase <= std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn amplitudes_continuous_across_barrier(lambda in 0.1f64..10.0, a in 0.2f64..2.0) {
        let cfg = WellConfig::new(lambda, a).unwrap();
        let w0 = lambda.sqrt();
        let (below, above) = (w0 * (1.0 - 1e-12), w0 * (1.0 + 1e-12));
        let s1b = mode_solution(&cfg, Parity::Symmetric, below).unwrap();
        let s1a = mode_solution(&cfg, Parity::Symmetric, above).unwrap();
        prop_assert!((s1b.amp_sq - s1a.amp_sq).abs() <= 1e-9 * s1a.amp_sq);
        // The antisymmetric A² has a pole at ω² = λ; its real interior coefficient does not.
        let s2b = mode_solution(&cfg, Parity::Antisymmetric, below).unwrap();
        let s2a = mode_solution(&cfg, Parity::Antisymmetric, above).unwrap();
        prop_assert!((s2b.norm_sq - s2a.norm_sq).abs() <= 1e-9 * s2a.norm_sq);
    }

    #[test]
    fn amplitudes_positive_above_barrier(lambda in 0.0f64..10.0, a in 0.2f64..2.0, excess in 0.01f64..100.0) {
        let cfg = WellConfig::new(lambda, a).unwrap();
        let w = (lambda + excess).sqrt();
        for parity in [Parity::Symmetric, Parity::Antisymmetric] {
            prop_assert!(mode_solution(&cfg, parity, w).unwrap().amp_sq > 0.0);
        }
    }

    #[test]
    fn closed_r_integral_matches_quadrature(
        tau in 0.01f64..1.0,
        f0 in 0.0f64..0.5,
        f1 in 0.0f64..0.5,
    ) {
        let cfg = WellConfig::new(1.0, 1.0).unwrap();
        let reg = Regulator::new(f0 * tau, f1 * tau, tau).unwrap();
        let closed = r_integral_closed(&cfg, &reg).unwrap();
        let spec = QuadratureSpec::default().with_oscillation(reg.eps0 + reg.eps1);
        let q = integrate_halfline(|w| c64(r_omega(&cfg, w, &reg), 0.0), tau, &spec).unwrap();
        prop_assert!((q.value.re - closed).abs() <= 1e-6 * closed.abs() + 1e-15, "{} vs {closed}", q.value.re);
    }
}

#[test]
fn amplitudes_tend_to_one() {
    let cfg = WellConfig::new(2.0, 1.0).unwrap();
    for parity in [Parity::Symmetric, Parity::Antisymmetric] {
        let m = mode_solution(&cfg, parity, 1e4).unwrap();
        assert!((m.amp_sq - 1.0).abs() < 1e-7, "{m:?}");
    }
}

#[test]
fn density_is_even_in_x() {
    let cfg = WellConfig::new(1.0, 1.0).unwrap();
    let reg = Regulator::new(0.01, 0.01, 0.1).unwrap();
    let spec = QuadratureSpec::default();
    for x in [0.1, 0.35, 0.8] {
        let p = t00r_static(&cfg, &reg, x, 0.0, &spec).unwrap();
        let m = t00r_static(&cfg, &reg, -x, 0.0, &spec).unwrap();
        assert!((p.value - m.value).abs() <= 1e-12 + p.error_estimate + m.error_estimate, "{x}: {} vs {}", p.value, m.value);
    }
}
