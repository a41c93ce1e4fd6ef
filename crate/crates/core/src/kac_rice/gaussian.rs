//! `E|A z₁² + B z₂² + 2C z₁ z₃|` for a standard Gaussian vector `z ∈ ℝ³`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::quadrature::tanh_sinh;
use crate::rng::rng_stream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsQuadraticCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AbsQuadraticCoeffs {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// Eigenvalues of the quadratic form `A x² + B y² + 2C x z`.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let disc = (self.a * self.a + 4.0 * self.c * self.c).sqrt();
        [self.b, 0.5 * (self.a + disc), 0.5 * (self.a - disc)]
    }

    fn scale(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianMethod {
    /// One-dimensional integral reduction.
    Reduction,
    /// Plain Monte Carlo with `samples` draws from stream `seed`.
    MonteCarlo { samples: usize, seed: u64 },
}

/// The expectation by the requested method. Use [`abs_gaussian_montecarlo`] to also
/// get the Monte-Carlo standard error.
pub fn abs_gaussian_integral(c: AbsQuadraticCoeffs, method: GaussianMethod) -> f64 {
    match method {
        GaussianMethod::Reduction => abs_gaussian_reduction(c),
        GaussianMethod::MonteCarlo { samples, seed } => abs_gaussian_montecarlo(c, samples, seed).0,
    }
}

// 1 - Re Π (1 - 2iλt)^{-1/2}, divided by t².
fn reduced_integrand(lambdas: &[f64; 3], t: f64) -> f64 {
    if t < 1e-7 {
        let sq: f64 = lambdas.iter().map(|l| l * l).sum();
        let lin: f64 = lambdas.iter().sum();
        return sq + 0.5 * lin * lin;
    }
    let mut re_w = 0.0;
    let mut im_w = 0.0;
    for &l in lambdas {
        if l == 0.0 {
            continue;
        }
        let x = 2.0 * l * t;
        re_w -= 0.25 * (x * x).ln_1p();
        im_w += 0.5 * x.atan();
    }
    let half = (0.5 * im_w).sin();
    let num = -re_w.exp_m1() * im_w.cos() + 2.0 * half * half;
    num / (t * t)
}

/// `(2/π) ∫₀^∞ (1 - Re Π_k (1 - 2iλ_k t)^{-1/2}) / t² dt` with `λ_k` the eigenvalues.
///
/// The argument of the product is tracked continuously through the sum of arctangents.
pub fn abs_gaussian_reduction(c: AbsQuadraticCoeffs) -> f64 {
    let m = c.scale();
    if m == 0.0 || !m.is_finite() {
        return if m == 0.0 { 0.0 } else { f64::NAN };
    }
    let unit = AbsQuadraticCoeffs::new(c.a / m, c.b / m, c.c / m);
    let lambdas = unit.eigenvalues();
    let head = tanh_sinh(|t| reduced_integrand(&lambdas, t), 0.0, 1.0, 1e-13);
    // t = 1/u maps [1, ∞) onto (0, 1]
    let tail = tanh_sinh(
        |u| {
            let t = 1.0 / u;
            if t.is_finite() {
                reduced_integrand(&lambdas, t) * t * t
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        1e-13,
    );
    m * 2.0 / PI * (head.value + tail.value)
}

/// Monte-Carlo mean and standard error.
pub fn abs_gaussian_montecarlo(c: AbsQuadraticCoeffs, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = rng_stream(seed, 0x6761_7573);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..samples {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let z3: f64 = rng.sample(StandardNormal);
        let x = (c.a * z1 * z1 + c.b * z2 * z2 + 2.0 * c.c * z1 * z3).abs();
        let d = x - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (x - mean);
    }
    let var = if samples > 1 { m2 / (samples - 1) as f64 } else { f64::NAN };
    (mean, (var / samples as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, c: f64) -> f64 {
        abs_gaussian_reduction(AbsQuadraticCoeffs::new(a, b, c))
    }

    #[test]
    fn exact_cases() {
        assert!((q(1.0, 0.0, 0.0) - 1.0).abs() < 1e-10);
        assert!((q(0.0, 0.0, 1.0) - 4.0 / PI).abs() < 1e-10);
        assert!((q(1.0, -1.0, 2f64.sqrt()) - 4.0 / 3f64.sqrt()).abs() < 1e-10);
        // E|z₁² + z₂²| = 2
        assert!((q(1.0, 1.0, 0.0) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn homogeneous_and_sign_symmetric() {
        let base = q(0.3, -1.2, 0.7);
        assert!((q(3e150, -1.2e151, 7e150) / 1e151 - base).abs() < 1e-10 * base);
        assert!((q(-0.3, 1.2, 0.7) - base).abs() < 1e-10);
        assert!((q(0.3, -1.2, -0.7) - base).abs() < 1e-10);
    }

    #[test]
    fn montecarlo_agrees() {
        let c = AbsQuadraticCoeffs::new(0.4, -2.0, 1.1);
        let (mean, se) = abs_gaussian_montecarlo(c, 200_000, 11);
        assert!((mean - abs_gaussian_reduction(c)).abs() < 4.0 * se);
    }
}
