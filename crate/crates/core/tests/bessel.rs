use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use wavecrit_core::bessel::{addition_sums, addition_sums_exact};
use wavecrit_core::bessel_block;

/// `J_n(x)` for rational `x` from the power series in exact arithmetic.
fn bessel_rational(n: u32, x: &BigRational, terms: u32) -> BigRational {
    let half = x / BigRational::from_integer(BigInt::from(2));
    let half_sq = &half * &half;
    let mut term = BigRational::one();
    for k in 1..=n {
        term = term * &half / BigRational::from_integer(BigInt::from(k));
    }
    let mut sum = BigRational::zero();
    for k in 0..terms {
        sum += &term;
        let denom = BigInt::from(k + 1) * BigInt::from(k + 1 + n);
        term = -(term * &half_sq) / BigRational::from_integer(denom);
    }
    sum
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn j2_of_5_matches_exact_power_series() {
    let oracle = bessel_rational(2, &ratio(5, 1), 60).to_f64().unwrap();
    let block = bessel_block(5.0, 10).unwrap();
    assert!((block.j()[2] - oracle).abs() < 1e-14, "{} vs {oracle}", block.j()[2]);
}

#[test]
fn block_matches_power_series_for_many_orders() {
    let x = ratio(37, 4);
    let block = bessel_block(9.25, 30).unwrap();
    for n in 0..=30 {
        let oracle = bessel_rational(n, &x, 90).to_f64().unwrap();
        let got = block.j()[n as usize];
        assert!((got - oracle).abs() < 1e-13 * oracle.abs().max(1e-3), "n={n}: {got} vs {oracle}");
    }
}

#[test]
fn addition_sums_match_rational_oracle() {
    // r = 3: orders beyond 40 contribute below 1e-30
    let x = ratio(3, 1);
    let j: Vec<f64> = (0..=42).map(|n| bessel_rational(n, &x, 80).to_f64().unwrap()).collect();
    let jp = |l: usize| {
        let lo = if l == 0 { -j[1] } else { j[l - 1] };
        0.5 * (lo - j[l + 1])
    };
    let mut want = [j[0] * j[0], jp(0) * jp(0), 0.0, 0.0];
    for l in 1..=40 {
        let l2 = (l * l) as f64;
        want[0] += 2.0 * j[l] * j[l];
        want[1] += 2.0 * jp(l) * jp(l);
        want[2] += 2.0 * l2 * j[l] * jp(l);
        want[3] += 2.0 * l2 * l2 * j[l] * j[l];
    }
    let got = addition_sums(3.0).unwrap();
    let exact = addition_sums_exact(3.0);
    for k in 0..4 {
        assert!((got[k] - want[k]).abs() < 1e-12 * want[k].abs(), "sum {k}");
        assert!((exact[k] - want[k]).abs() < 1e-12 * want[k].abs(), "closed form {k}");
    }
}

proptest! {
    #[test]
    fn normalization_sums(r in 0.1f64..800.0) {
        // past the turning point J_l decays on the scale r^{1/3}
        let order = (r + 20.0 * r.cbrt()) as usize + 30;
        let full = bessel_block(r, order).unwrap();
        let j = full.j();
        let even: f64 = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
        let sq: f64 = j[0] * j[0] + 2.0 * j.iter().skip(1).map(|v| v * v).sum::<f64>();
        prop_assert!((even - 1.0).abs() < 1e-12);
        prop_assert!((sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ode_residual(r in 0.1f64..800.0, l in 0usize..120) {
        let block = bessel_block(r, l + 2).unwrap();
        let (j, jp, jpp) = (block.j()[l], block.jp()[l], block.jpp()[l]);
        let lf = l as f64;
        let residual = r * r * jpp + r * jp + (r * r - lf * lf) * j;
        let scale = r * r * jpp.abs() + r * jp.abs() + (r * r + lf * lf) * j.abs() + 1e-300;
        prop_assert!(residual.abs() <= 1e-11 * scale, "residual {residual} scale {scale}");
    }

    #[test]
    fn addition_identities(r in 0.1f64..500.0) {
        let got = addition_sums(r).unwrap();
        let want = addition_sums_exact(r);
        for k in 0..4 {
            prop_assert!((got[k] - want[k]).abs() <= 1e-9 * want[k].abs(), "sum {k}: {} vs {}", got[k], want[k]);
        }
    }
}
