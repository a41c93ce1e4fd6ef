//! Gamma, reciprocal Gamma and Riemann zeta on the real line.
//!
//! All Gamma-type constants of the crate go through this module, so a pole of
//! `Γ` shows up as an exact zero of [`rgamma`] rather than as an overflow.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    let y = x.rem_euclid(2.0);
    let (y, sign) = if y > 1.0 { (y - 1.0, -1.0) } else { (y, 1.0) };
    let y = if y > 0.5 { 1.0 - y } else { y };
    sign * (PI * y).sin()
}

/// `cos(πx)` with exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

// ln Γ(x) for x >= 0.5 via the Lanczos series.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Γ(x) for real `x`. Returns `±inf` at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x.fract() == 0.0 && x <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    // upward recurrence from [0.5, 1.5) keeps full relative precision
    let mut y = x;
    let mut prod = 1.0;
    while y >= 1.5 {
        y -= 1.0;
        prod *= y;
    }
    prod * ln_gamma_lanczos(y).exp()
}

/// 1/Γ(x), exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        return sin_pi(x) * gamma(1.0 - x) / PI;
    }
    if x > 170.0 {
        return (-ln_gamma_lanczos(x)).exp();
    }
    1.0 / gamma(x)
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return (PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x);
    }
    ln_gamma_lanczos(x)
}

// B_{2j}/(2j)! for j = 1..=10
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

/// Riemann zeta function for real `x > 1` by Euler–Maclaurin summation.
pub fn zeta(x: f64) -> f64 {
    assert!(x > 1.0, "zeta is only implemented for x > 1 (got {x})");
    if x > 60.0 {
        return 1.0 + 2f64.powf(-x) + 3f64.powf(-x);
    }
    const N: usize = 20;
    let n = N as f64;
    let mut sum = 0.0;
    for k in 1..N {
        sum += (k as f64).powf(-x);
    }
    sum += n.powf(1.0 - x) / (x - 1.0) + 0.5 * n.powf(-x);
    // rising factorial x (x+1) ... (x+2j-2) times N^{-x-2j+1}
    let mut rising = x;
    let mut npow = n.powf(-x - 1.0);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += c * rising * npow;
        let k = 2.0 * j as f64;
        rising *= (x + k + 1.0) * (x + k + 2.0);
        npow /= n * n;
    }
    sum
}
