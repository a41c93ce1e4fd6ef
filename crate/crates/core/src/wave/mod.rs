//! The Gaussian random monochromatic wave
//! `u(r,θ) = Σ_{l≠0} a_l σ_l e^{ilθ} J_l(r)` with `a_{-l} = (-1)^l conj(a_l)`.

mod farfield;
mod search;
mod stats;

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bessel::bessel_block;
use crate::error::{Error, Result};
use crate::regularity::RegularityModel;
use crate::rng::rng_from_seed;

pub use farfield::{far_field_amplitude, far_field_predict, match_far_field, FarFieldMatch, FarFieldPrediction};
pub use search::{find_critical_points, CriticalKind, CriticalPoint, SearchParams};
pub use stats::{
    count_record, empirical_expectation, exponent_fit, l_max_for_radius, linear_law_per_sample,
    simulate_counts, CountRecord, EmpiricalExpectation, ExponentFit, LinearLaw,
};

/// Smallest admissible truncation.
pub const MIN_L_MAX: usize = 8;

/// A realisation of the wave, truncated at `|l| <= l_max`.
#[derive(Debug, Clone)]
pub struct WaveSample {
    model: RegularityModel,
    seed: u64,
    /// `coeffs[l] = a_l` for `0 <= l <= l_max`; `coeffs[0] = 0`.
    coeffs: Arc<[Complex64]>,
    sigma: Arc<[f64]>,
}

/// `u`, `Du = (∂_θ u, ∂_r u)` and `D²u = [[∂_θθ, ∂_rθ], [∂_rθ, ∂_rr]]` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveEval {
    pub r: f64,
    pub theta: f64,
    pub u: f64,
    pub du: [f64; 2],
    pub d2u: [[f64; 2]; 2],
}

impl WaveEval {
    /// Cartesian gradient and Hessian `([u_x, u_y], [[u_xx, u_xy], [u_xy, u_yy]])`.
    pub fn cartesian(&self) -> ([f64; 2], [[f64; 2]; 2]) {
        let (s, c) = self.theta.sin_cos();
        let r = self.r;
        let [ut, ur] = self.du;
        let [[utt, urt], [_, urr]] = self.d2u;
        let ux = c * ur - s * ut / r;
        let uy = s * ur + c * ut / r;
        let (cc, ss, sc) = (c * c, s * s, s * c);
        let uxx = cc * urr - 2.0 * sc * urt / r + ss * utt / (r * r) + ss * ur / r + 2.0 * sc * ut / (r * r);
        let uyy = ss * urr + 2.0 * sc * urt / r + cc * utt / (r * r) + cc * ur / r - 2.0 * sc * ut / (r * r);
        let uxy = sc * urr + (cc - ss) * urt / r - sc * utt / (r * r) - sc * ur / r - (cc - ss) * ut / (r * r);
        ([ux, uy], [[uxx, uxy], [uxy, uyy]])
    }
}

impl WaveSample {
    /// Draw `a_1, ..., a_{l_max}` from the stream keyed by `seed` (real part first).
    pub fn sample(model: &RegularityModel, seed: u64, l_max: usize) -> Result<Self> {
        if l_max < MIN_L_MAX {
            return Err(Error::Precondition(format!("l_max must be >= {MIN_L_MAX}, got {l_max}")));
        }
        let mut rng = rng_from_seed(seed);
        let mut coeffs = Vec::with_capacity(l_max + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        for _ in 1..=l_max {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            coeffs.push(Complex64::new(re, im));
        }
        Ok(Self::build(model, seed, coeffs))
    }

    /// A sample with prescribed `a_1, ..., a_n` (`coeffs[0]` is `a_1`).
    pub fn from_coeffs(model: &RegularityModel, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("at least one coefficient is required".into()));
        }
        let mut all = Vec::with_capacity(coeffs.len() + 1);
        all.push(Complex64::new(0.0, 0.0));
        all.extend_from_slice(coeffs);
        Ok(Self::build(model, 0, all))
    }

    fn build(model: &RegularityModel, seed: u64, coeffs: Vec<Complex64>) -> Self {
        let sigma: Vec<f64> = (0..coeffs.len()).map(|l| model.weight(l as i64)).collect();
        Self { model: model.clone(), seed, coeffs: coeffs.into(), sigma: sigma.into() }
    }

    pub fn model(&self) -> &RegularityModel {
        &self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn l_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_l` for `1 <= l <= l_max` at index `l`; index 0 holds 0.
    pub fn coeffs(&self) -> &Arc<[Complex64]> {
        &self.coeffs
    }

    /// `a_l` for any integer `l`, using the reality constraint for `l < 0`.
    pub fn coeff(&self, l: i64) -> Complex64 {
        let n = l.unsigned_abs() as usize;
        if n >= self.coeffs.len() {
            return Complex64::new(0.0, 0.0);
        }
        let a = self.coeffs[n];
        if l >= 0 {
            a
        } else if n.is_multiple_of(2) {
            a.conj()
        } else {
            -a.conj()
        }
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().zip(self.sigma.iter()).all(|(a, &s)| a.norm_sqr() == 0.0 || s == 0.0)
    }

    /// Mode spectrum `2 σ_l a_l` shared by all evaluators.
    pub(crate) fn weighted(&self, l: usize) -> Complex64 {
        self.coeffs[l] * (2.0 * self.sigma[l])
    }

    /// `u` and its polar derivatives, exact for the truncated sum.
    pub fn evaluate(&self, r: f64, theta: f64) -> Result<WaveEval> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        let l_max = self.l_max();
        let block = bessel_block(r, l_max.max(2))?;
        let (j, jp, jpp) = (block.j(), block.jp(), block.jpp());
        let step = Complex64::from_polar(1.0, theta);
        let mut e = Complex64::new(1.0, 0.0);
        let (mut u, mut ut, mut ur, mut utt, mut urt, mut urr) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for l in 1..=l_max {
            e *= step;
            if l % 64 == 0 {
                e = Complex64::from_polar(1.0, l as f64 * theta);
            }
            let w = self.weighted(l) * e;
            let lf = l as f64;
            u += j[l] * w.re;
            ut -= lf * j[l] * w.im;
            utt -= lf * lf * j[l] * w.re;
            ur += jp[l] * w.re;
            urt -= lf * jp[l] * w.im;
            urr += jpp[l] * w.re;
        }
        Ok(WaveEval { r, theta, u, du: [ut, ur], d2u: [[utt, urt], [urt, urr]] })
    }

    /// Two-sided sum `Σ_{0<|l|<=l_max} a_l σ_l e^{ilθ} J_l(r)`, complex; its imaginary
    /// part vanishes up to rounding.
    pub fn evaluate_two_sided(&self, r: f64, theta: f64) -> Result<Complex64> {
        let l_max = self.l_max();
        let block = bessel_block(r, l_max.max(2))?;
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 1..=l_max as i64 {
            for ll in [l, -l] {
                let e = Complex64::from_polar(1.0, ll as f64 * theta);
                acc += self.coeff(ll) * self.model.weight(ll) * e * block.j_signed(ll);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_sampling() {
        let m = RegularityModel::new(0.0);
        let a = WaveSample::sample(&m, 42, 30).unwrap();
        let b = WaveSample::sample(&m, 42, 30).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert!(WaveSample::sample(&m, 42, 4).is_err());
    }

    #[test]
    fn single_mode_closed_form() {
        let m = RegularityModel::new(0.7);
        let w = WaveSample::from_coeffs(&m, &[Complex64::new(1.0, 0.0)]).unwrap();
        let (r, th) = (3.3, 0.4);
        let e = w.evaluate(r, th).unwrap();
        let j1 = bessel_block(r, 4).unwrap().j()[1];
        assert!((e.u - 2.0 * j1 * th.cos()).abs() < 1e-14);
        assert!((e.du[0] + 2.0 * j1 * th.sin()).abs() < 1e-14);
    }

    #[test]
    fn helmholtz_and_reality() {
        let m = RegularityModel::new(0.3);
        let w = WaveSample::sample(&m, 5, 60).unwrap();
        for &(r, th) in &[(1.0, 0.1), (7.5, 2.0), (25.0, 5.5)] {
            let e = w.evaluate(r, th).unwrap();
            let res = e.d2u[1][1] + e.du[1] / r + e.d2u[0][0] / (r * r) + e.u;
            assert!(res.abs() < 1e-9, "{res}");
            let two = w.evaluate_two_sided(r, th).unwrap();
            assert!(two.im.abs() < 1e-12);
            assert!((two.re - e.u).abs() < 1e-12);
        }
    }

    #[test]
    fn cartesian_matches_finite_differences() {
        let m = RegularityModel::new(0.0);
        let w = WaveSample::sample(&m, 9, 40).unwrap();
        let at = |x: f64, y: f64| w.evaluate(x.hypot(y), y.atan2(x)).unwrap();
        let (x, y, h) = (3.1, -4.7, 1e-5);
        let (g, hess) = at(x, y).cartesian();
        let gx = at(x + h, y).cartesian().0;
        let gx0 = at(x - h, y).cartesian().0;
        let gy = at(x, y + h).cartesian().0;
        let gy0 = at(x, y - h).cartesian().0;
        assert!(((at(x + h, y).u - at(x - h, y).u) / (2.0 * h) - g[0]).abs() < 1e-7);
        assert!(((at(x, y + h).u - at(x, y - h).u) / (2.0 * h) - g[1]).abs() < 1e-7);
        assert!(((gx[0] - gx0[0]) / (2.0 * h) - hess[0][0]).abs() < 1e-6);
        assert!(((gx[1] - gx0[1]) / (2.0 * h) - hess[0][1]).abs() < 1e-6);
        assert!(((gy[1] - gy0[1]) / (2.0 * h) - hess[1][1]).abs() < 1e-6);
    }
}
