use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use wavecrit_core::wave::{
    far_field_amplitude, far_field_predict, find_critical_points, l_max_for_radius, match_far_field, simulate_counts,
};
use wavecrit_core::{CriticalKind, DensityRealization, RegularityModel, SearchParams, WaveSample};

fn bessel_integral(n: i32, x: f64) -> f64 {
    let m = 512;
    (0..m)
        .map(|k| {
            let t = TAU * k as f64 / m as f64;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

fn j1(x: f64) -> f64 {
    bessel_integral(1, x)
}

fn j1_prime(x: f64) -> f64 {
    0.5 * (bessel_integral(0, x) - bessel_integral(2, x))
}

fn roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let n = 4000;
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    for k in 0..n {
        let (mut a, mut b) = (lo + k as f64 * h, lo + (k + 1) as f64 * h);
        if f(a) * f(b) > 0.0 {
            continue;
        }
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

#[test]
fn single_mode_critical_points() {
    // u = 2 J_1(r) cos θ: critical where J_1' = 0, sin θ = 0 or J_1 = 0, cos θ = 0
    let radius = 20.0;
    let sample = WaveSample::from_coeffs(&RegularityModel::new(1.0), &[Complex64::new(1.0, 0.0)]).unwrap();
    let mut oracle = Vec::new();
    for r in roots(j1_prime, 0.5, radius) {
        oracle.push((r, 0.0, CriticalKind::Extremum));
        oracle.push((r, PI, CriticalKind::Extremum));
    }
    for r in roots(j1, 0.5, radius) {
        oracle.push((r, PI / 2.0, CriticalKind::Saddle));
        oracle.push((r, 3.0 * PI / 2.0, CriticalKind::Saddle));
    }
    assert_eq!(oracle.len(), 24);
    let found = find_critical_points(&sample, radius, &SearchParams::default()).unwrap();
    assert_eq!(found.len(), oracle.len());
    for (r, theta, kind) in oracle {
        let hit = found
            .iter()
            .find(|p| (p.r - r).abs() < 1e-8 && (p.theta - theta).abs().min(TAU - (p.theta - theta).abs()) < 1e-8);
        let hit = hit.unwrap_or_else(|| panic!("missing ({r}, {theta})"));
        assert_eq!(hit.kind, kind);
    }
}

#[test]
fn found_points_are_accurate_and_classified() {
    let params = SearchParams::default();
    for s in [0.0, 1.0, 2.0] {
        let sample = WaveSample::sample(&RegularityModel::new(s), 11, l_max_for_radius(25.0)).unwrap();
        let pts = find_critical_points(&sample, 25.0, &params).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(p.residual < params.newton_tol);
            assert!(p.r <= 25.0 && (0.0..TAU).contains(&p.theta));
            let want = if p.hessian_det < 0.0 { CriticalKind::Saddle } else { CriticalKind::Extremum };
            if p.kind != CriticalKind::Degenerate {
                assert_eq!(p.kind, want);
            }
        }
        for w in pts.windows(2) {
            let (a, b) = (w[0].xy(), w[1].xy());
            assert!((a.0 - b.0).hypot(a.1 - b.1) > params.dedup_radius);
        }
    }
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    let model = RegularityModel::new(0.5);
    let params = SearchParams::default();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| simulate_counts(&model, 12.0, 6, 99, l_max_for_radius(12.0), &params).unwrap())
    };
    let key = |v: Vec<wavecrit_core::CountRecord>| v.iter().map(|r| (r.seed, r.n_critical, r.n_saddle)).collect::<Vec<_>>();
    assert_eq!(key(run(1)), key(run(3)));
}

#[test]
fn far_field_amplitude_approximates_wave() {
    let sample = WaveSample::sample(&RegularityModel::new(6.0), 3, 400).unwrap();
    let density = DensityRealization::from_sample(&sample);
    let r = 200.0;
    let scale = (8.0 * PI / r).sqrt() * (0..64).map(|k| density.eval_all(TAU * k as f64 / 64.0)[0].norm()).fold(0.0, f64::max);
    for k in 0..40 {
        let theta = TAU * k as f64 / 40.0;
        let u = sample.evaluate(r, theta).unwrap().u;
        assert!((u - far_field_amplitude(&density, r, theta)).abs() < 0.05 * scale);
    }
}

#[test]
fn far_field_predictions_match_found_points() {
    let sample = WaveSample::sample(&RegularityModel::new(6.0), 5, l_max_for_radius(60.0)).unwrap();
    let found = find_critical_points(&sample, 60.0, &SearchParams::default()).unwrap();
    let preds = far_field_predict(&sample, 8, 21).unwrap();
    let matches = match_far_field(&preds, &found, 30.0);
    assert_eq!(matches.len(), found.iter().filter(|p| p.r > 30.0).count());
    assert!(matches.iter().all(|m| m.distance < 0.5), "{matches:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn helmholtz_and_reality(s in -0.5f64..4.0, seed in 0u64..1_000, r in 0.2f64..40.0, theta in 0.0f64..TAU) {
        let sample = WaveSample::sample(&RegularityModel::new(s), seed, 100).unwrap();
        let e = sample.evaluate(r, theta).unwrap();
        let [_, ur] = e.du;
        let [[utt, _], [_, urr]] = e.d2u;
        let lap = urr + ur / r + utt / (r * r) + e.u;
        let scale = urr.abs() + ur.abs() / r + utt.abs() / (r * r) + e.u.abs() + 1e-12;
        prop_assert!(lap.abs() < 1e-10 * scale);
        let two = sample.evaluate_two_sided(r, theta).unwrap();
        prop_assert!(two.im.abs() < 1e-10 * (1.0 + two.re.abs()));
        prop_assert!((two.re - e.u).abs() < 1e-10 * (1.0 + e.u.abs()));
    }

    #[test]
    fn same_seed_same_sample(s in -0.5f64..4.0, seed in any::<u64>()) {
        let model = RegularityModel::new(s);
        let a = WaveSample::sample(&model, seed, 40).unwrap();
        let b = WaveSample::sample(&model, seed, 40).unwrap();
        prop_assert_eq!(a.coeffs(), b.coeffs());
        prop_assert_eq!(a.coeff(-3), -a.coeff(3).conj());
    }
}
