//! Growth constants `κ(s)` of the expected number of critical points.

use std::f64::consts::PI;

use super::covariance::covariance_at;
use super::gaussian::{abs_gaussian_reduction, AbsQuadraticCoeffs};
use super::integrand_from_state;
use crate::error::{Error, Result};
use crate::quadrature::periodic_trapezoid_adaptive;
use crate::series::HALF_TIE;
use crate::special::{gamma, zeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SubHalf,
    Half,
    HalfToThreeHalf,
    ThreeHalf,
    ThreeHalfToFiveHalf,
    FiveHalf,
    AboveFiveHalf,
}

impl Regime {
    pub fn of(s: f64) -> Regime {
        let near = |x: f64| (s - x).abs() <= HALF_TIE;
        if near(0.5) {
            Regime::Half
        } else if near(1.5) {
            Regime::ThreeHalf
        } else if near(2.5) {
            Regime::FiveHalf
        } else if s < 0.5 {
            Regime::SubHalf
        } else if s < 1.5 {
            Regime::HalfToThreeHalf
        } else if s < 2.5 {
            Regime::ThreeHalfToFiveHalf
        } else {
            Regime::AboveFiveHalf
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SubHalf => "sub_half",
            Regime::Half => "half",
            Regime::HalfToThreeHalf => "half_to_three_half",
            Regime::ThreeHalf => "three_half",
            Regime::ThreeHalfToFiveHalf => "three_half_to_five_half",
            Regime::FiveHalf => "five_half",
            Regime::AboveFiveHalf => "above_five_half",
        }
    }
}

/// `E N(∇u, R) ~ kappa · R^exponent · (log R)^log_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaResult {
    pub s: f64,
    pub regime: Regime,
    pub kappa: f64,
    pub exponent: f64,
    pub log_power: f64,
}

impl KappaResult {
    pub fn predicted(&self, radius: f64) -> f64 {
        self.kappa * radius.powf(self.exponent) * radius.ln().powf(self.log_power)
    }
}

/// Piecewise-linear growth exponent.
pub fn growth_exponent(s: f64) -> f64 {
    match Regime::of(s) {
        Regime::SubHalf | Regime::Half | Regime::HalfToThreeHalf | Regime::ThreeHalf => 2.0,
        Regime::ThreeHalfToFiveHalf => 3.5 - s,
        Regime::FiveHalf | Regime::AboveFiveHalf => 1.0,
    }
}

pub fn log_power(s: f64) -> f64 {
    match Regime::of(s) {
        Regime::ThreeHalf => -0.5,
        Regime::FiveHalf => 0.5,
        _ => 0.0,
    }
}

/// `κ(s)` for `s < 1/2` through the Gaussian absolute-value integral.
pub fn kappa_sub_half(s: f64) -> f64 {
    let a = ((1.0 - 2.0 * s) / (8.0 - 4.0 * s)).sqrt();
    abs_gaussian_reduction(AbsQuadraticCoeffs::new(a, -a, 0.5)) / (2.0 * (2.0 - s).sqrt())
}

fn average(f: impl FnMut(f64) -> f64) -> f64 {
    periodic_trapezoid_adaptive(f, PI, 1e-13).value
}

/// Closed form on `3/2 < s < 5/2`.
pub fn kappa_three_half_to_five_half(s: f64) -> f64 {
    let q = 4f64.powf(s);
    let pre = 2f64.powf(2.0 * s + 0.5) * ((q - 1.0) * gamma(5.0 - 2.0 * s) / zeta(2.0 * s - 2.0)).sqrt()
        / (PI.powf(1.5) * (7.0 - 2.0 * s) * gamma(3.0 - s));
    let integral = average(|r| {
        let sn = (2.0 * r).sin();
        1.0 / (((q - 2.0) * sn + q) * (q - (q - 8.0) * sn).sqrt())
    });
    pre * integral
}

/// `κ̃` at `s = 5/2`.
pub fn kappa_five_half() -> f64 {
    let integral = average(|r| {
        let sn = (2.0 * r).sin();
        1.0 / ((16.0 + 15.0 * sn) * (4.0 - 3.0 * sn).sqrt())
    });
    4.0 / (PI * PI) * (31.0 / zeta(3.0)).sqrt() * integral
}

/// Magnitude of `r` at which the leading covariance terms are effectively exact.
pub fn default_generic_radius(s: f64) -> f64 {
    match Regime::of(s) {
        Regime::SubHalf | Regime::AboveFiveHalf => 1e3,
        Regime::HalfToThreeHalf => 1e60,
        _ => 1e30,
    }
}

/// `κ(s)` from the asymptotic covariance: the integrand at radius `r_mag` with the
/// oscillating phase `φ` decoupled, divided by `r_mag^{e-1}` and averaged over `φ`.
///
/// Not defined at the logarithmic points `s ∈ {1/2, 3/2, 5/2}`.
pub fn kappa_generic(s: f64, r_mag: f64) -> Result<f64> {
    if matches!(Regime::of(s), Regime::Half | Regime::ThreeHalf | Regime::FiveHalf) {
        return Err(Error::Domain(format!("no power-law pipeline at the logarithmic point s = {s}")));
    }
    let a = growth_exponent(s) - 1.0;
    let scale = r_mag.powf(a);
    let mut failure = None;
    let integral = average(|phi| match covariance_at(s, r_mag, phi) {
        Ok(st) => integrand_from_state(&st) / scale,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(2.0 / (a + 1.0) * integral),
    }
}

/// `κ(s)` together with its regime, exponent and logarithmic power.
pub fn kappa_constant(s: f64) -> Result<KappaResult> {
    if !s.is_finite() {
        return Err(Error::Domain(format!("s must be finite, got {s}")));
    }
    let regime = Regime::of(s);
    let kappa = match regime {
        Regime::SubHalf => kappa_sub_half(s),
        Regime::Half => (2.0f64 / 3.0).sqrt() / PI,
        Regime::HalfToThreeHalf => ((3.0 - 2.0 * s) / (4.0 - 2.0 * s)).sqrt() / PI,
        Regime::ThreeHalf => 1.0 / PI,
        Regime::ThreeHalfToFiveHalf => kappa_three_half_to_five_half(s),
        Regime::FiveHalf => kappa_five_half(),
        Regime::AboveFiveHalf => kappa_generic(s, default_generic_radius(s))?,
    };
    Ok(KappaResult { s, regime, kappa, exponent: growth_exponent(s), log_power: log_power(s) })
}

/// `κ` along a sorted grid of `s < 1/2`.
pub fn kappa_monotonicity_scan(grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    if let Some(&bad) = grid.iter().find(|&&s| !(s < 0.5) || Regime::of(s) == Regime::Half) {
        return Err(Error::Domain(format!("grid values must be below 1/2, got {bad}")));
    }
    Ok(grid.iter().map(|&s| (s, kappa_sub_half(s))).collect())
}
