//! Kac–Rice expectation of the number of critical points in the disk `B_R`.
//!
//! In polar coordinates the expected count is `2π ∫ 𝓘(r) dr` where `𝓘` is the
//! Gaussian absolute-value integral of the conditioned Hessian determinant divided by
//! the gradient density at zero.

mod covariance;
mod gaussian;
mod kappa;

use std::f64::consts::PI;

pub use covariance::{covariance_at, covariance_state, CovarianceState, CovarianceSums};
pub use gaussian::{
    abs_gaussian_integral, abs_gaussian_montecarlo, abs_gaussian_reduction, AbsQuadraticCoeffs,
    GaussianMethod,
};
pub use kappa::{
    default_generic_radius, growth_exponent, kappa_constant, kappa_five_half, kappa_generic,
    kappa_monotonicity_scan, kappa_sub_half, kappa_three_half_to_five_half, log_power, KappaResult,
    Regime,
};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_kronrod, periodic_trapezoid_adaptive};
use crate::regularity::RegularityModel;
use crate::series::Method;

/// Default inner radius excised from the expectation integral.
pub const DEFAULT_R_MIN: f64 = PI;

/// `𝓘(r)` from an assembled covariance state.
pub fn integrand_from_state(st: &CovarianceState) -> f64 {
    let q = abs_gaussian_reduction(AbsQuadraticCoeffs::new(
        st.sigma_13,
        -st.sigma_22,
        0.5 * st.cross_root,
    ));
    q / (2.0 * PI * st.sigma_prod.sqrt())
}

/// The Kac–Rice density `𝓘(r)`; `2π 𝓘(r) dr` counts critical points per unit radius.
pub fn kac_rice_integrand(model: &RegularityModel, r: f64, method: Method) -> Result<f64> {
    Ok(integrand_from_state(&covariance_state(model, r, method)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub error_estimate: f64,
    /// Set when the quadrature did not reach relative accuracy `1e-6`.
    pub warning: bool,
}

/// `E N(∇u, R)` restricted to the annulus `r_min < |x| < R`.
pub fn expected_critical_points(
    model: &RegularityModel,
    radius: f64,
    r_min: f64,
    method: Method,
) -> Result<Expectation> {
    if !(r_min > 0.0 && r_min < radius && radius.is_finite()) {
        return Err(Error::Domain(format!("need 0 < r_min < R, got r_min={r_min}, R={radius}")));
    }
    if method == Method::Asymptotic && r_min < crate::series::DEFAULT_ASYMPTOTIC_MIN_RADIUS {
        return Err(Error::Domain(format!(
            "asymptotic integrand needs r_min >= {}, got {r_min}",
            crate::series::DEFAULT_ASYMPTOTIC_MIN_RADIUS
        )));
    }
    let mut failure: Option<Error> = None;
    let pieces = ((radius - r_min) / (0.5 * PI)).ceil() as usize;
    let q = gauss_kronrod(
        |r| match kac_rice_integrand(model, r, method) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        r_min,
        radius,
        0.0,
        1e-9,
        pieces,
        pieces * 8 + 64,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let value = 2.0 * PI * q.value;
    let error_estimate = 2.0 * PI * q.error;
    Ok(Expectation { value, error_estimate, warning: error_estimate > 1e-6 * value.abs() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicAverage {
    /// `R^{a+1} (log R)^b / (π (a+1)) · ∫₀^π P`.
    pub prediction: f64,
    /// `∫₀^π P`.
    pub integral: f64,
}

/// Leading behaviour of `∫^R r^a (log r)^b P(r) dr` for a positive π-periodic `P`.
pub fn periodic_average<F: FnMut(f64) -> f64>(p: F, a: f64, b: f64, radius: f64) -> Result<PeriodicAverage> {
    if a < 0.0 || (a == 0.0 && b < 0.0) {
        return Err(Error::Domain(format!("need a >= 0 (and b >= 0 when a = 0), got a={a}, b={b}")));
    }
    let integral = periodic_trapezoid_adaptive(p, PI, 1e-13).value;
    let prediction = radius.powf(a + 1.0) * radius.ln().powf(b) / (PI * (a + 1.0)) * integral;
    Ok(PeriodicAverage { prediction, integral })
}
