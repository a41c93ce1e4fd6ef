use std::f64::consts::PI;

use proptest::prelude::*;
use wavecrit_core::kac_rice::{abs_gaussian_montecarlo, kappa_generic, kappa_sub_half, Regime};
use wavecrit_core::{
    abs_gaussian_integral, covariance_state, expected_critical_points, kac_rice_integrand, kappa_constant,
    AbsQuadraticCoeffs, GaussianMethod, Method, RegularityModel,
};

fn averaged_integrand(s: f64, r: f64, method: Method) -> f64 {
    let model = RegularityModel::new(s);
    let n = 32;
    (0..n)
        .map(|k| kac_rice_integrand(&model, r + PI * k as f64 / n as f64, method).unwrap())
        .sum::<f64>()
        / n as f64
}

#[test]
fn leading_covariance_matches_direct_sums() {
    for s in [0.0, 0.25, 0.75, 1.0, 2.0, 3.0] {
        let ratio = averaged_integrand(s, 400.0, Method::Direct) / averaged_integrand(s, 400.0, Method::Asymptotic);
        assert!((ratio - 1.0).abs() < 0.01, "s={s}: {ratio}");
    }
}

#[test]
fn logarithmic_regimes_approach_leading_order() {
    for s in [1.5, 2.5] {
        let dev = |r| (averaged_integrand(s, r, Method::Direct) / averaged_integrand(s, r, Method::Asymptotic) - 1.0).abs();
        let (near, far) = (dev(100.0), dev(400.0));
        assert!(far < near && far < 0.15, "s={s}: {near} -> {far}");
    }
}

#[test]
fn flat_spectrum_covariance() {
    // s = 0: J sums collapse to the addition formula values
    let st = covariance_state(&RegularityModel::new(0.0), 50.0, Method::Direct).unwrap();
    let j1 = wavecrit_core::bessel_block(50.0, 2).unwrap().j()[1];
    assert!((st.sigma_tilde_22 - (1.0 - 2.0 * j1 * j1)).abs() < 1e-12);
    assert!((st.sigma_tilde_11 - 2500.0).abs() < 1e-9);
    assert!((st.sigma_prod - st.sigma_tilde_11 * st.sigma_tilde_22).abs() < 1e-9 * st.sigma_prod);
    for v in [st.sigma_11, st.sigma_22, st.sigma_33] {
        assert!(v > 0.0);
    }
}

#[test]
fn kappa_values() {
    let k0 = kappa_constant(0.0).unwrap();
    assert!((k0.kappa - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-6);
    assert_eq!((k0.exponent, k0.log_power, k0.regime), (2.0, 0.0, Regime::SubHalf));

    for s in [0.6f64, 1.0, 1.4] {
        let closed = (1.0 / PI) * ((3.0 - 2.0 * s) / (4.0 - 2.0 * s)).sqrt();
        assert!((kappa_constant(s).unwrap().kappa - closed).abs() < 1e-12);
        let generic = kappa_generic(s, 1e60).unwrap();
        assert!((generic - closed).abs() < 1e-4, "s={s}: {generic} vs {closed}");
    }
    let left = kappa_sub_half(0.5 - 1e-7);
    assert!((left - (2.0f64 / 3.0).sqrt() / PI).abs() < 1e-6, "{left}");

    let k = kappa_constant(2.0).unwrap();
    assert_eq!((k.exponent, k.log_power), (1.5, 0.0));
    let k = kappa_constant(2.5).unwrap();
    assert!((k.kappa - 0.497339).abs() < 1e-4);
    assert_eq!((k.exponent, k.log_power), (1.0, 0.5));
    let k = kappa_constant(1.5).unwrap();
    assert_eq!((k.exponent, k.log_power), (2.0, -0.5));
}

#[test]
fn expectation_tracks_kappa() {
    let e = expected_critical_points(&RegularityModel::new(0.0), 150.0, PI, Method::Direct).unwrap();
    let pred = kappa_constant(0.0).unwrap().predicted(150.0);
    assert!((e.value / pred - 1.0).abs() < 0.01, "{} vs {pred}", e.value);
    assert!(expected_critical_points(&RegularityModel::new(0.0), 100.0, 2.0, Method::Asymptotic).is_err());
}

#[test]
fn gaussian_exact_cases() {
    let q = |a, b, c| abs_gaussian_integral(AbsQuadraticCoeffs::new(a, b, c), GaussianMethod::Reduction);
    assert!((q(1.0, 0.0, 0.0) - 1.0).abs() < 1e-8);
    assert!((q(0.0, 0.0, 1.0) - 4.0 / PI).abs() < 1e-8);
    assert!((q(0.0, 1.0, 0.0) - 1.0).abs() < 1e-8);
    assert_eq!(q(0.0, 0.0, 0.0), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_homogeneous_and_symmetric(
        a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, t in 0.01f64..100.0,
    ) {
        let q = |a, b, c| abs_gaussian_integral(AbsQuadraticCoeffs::new(a, b, c), GaussianMethod::Reduction);
        let base = q(a, b, c);
        prop_assert!(base >= 0.0);
        prop_assert!((q(t * a, t * b, t * c) - t * base).abs() <= 1e-9 * t * base.max(1e-12));
        prop_assert!((q(-a, -b, -c) - base).abs() <= 1e-10 * base.max(1e-12));
        prop_assert!((q(a, b, -c) - base).abs() <= 1e-10 * base.max(1e-12));
    }

    #[test]
    fn gaussian_reduction_agrees_with_sampling(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, seed in 0u64..1000) {
        let coeffs = AbsQuadraticCoeffs::new(a, b, c);
        let (mean, se) = abs_gaussian_montecarlo(coeffs, 20_000, seed);
        let exact = abs_gaussian_integral(coeffs, GaussianMethod::Reduction);
        prop_assert!((mean - exact).abs() <= 5.0 * se + 1e-12, "{mean} ± {se} vs {exact}");
    }
}
