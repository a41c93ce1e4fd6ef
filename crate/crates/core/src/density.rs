//! The random density on the circle,
//! `f(φ) = (1/2π) Σ_{l≠0} i^l a_l σ_l e^{ilφ}`, whose Fourier transform is the wave.
//!
//! With the reality constraint the two-sided sum folds into
//! `f(φ) = (1/π) Σ_{l>=1} σ_l i^l Re(a_l e^{ilφ})`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::regularity::RegularityModel;
use crate::wave::WaveSample;

/// `min |f|` below which the nonvanishing hypothesis is reported as violated.
pub const NONVANISHING_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DensityRealization {
    model: RegularityModel,
    coeffs: Arc<[Complex64]>,
    sigma: Vec<f64>,
}

/// Critical points of `|f|` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCriticalPoints {
    pub count: usize,
    pub locations: Vec<f64>,
    pub min_abs_f: f64,
    /// `min |f|` fell below [`NONVANISHING_TOL`].
    pub vanishing_warning: bool,
    /// Some root of `(|f|²)'` had a tiny second derivative.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicProfile {
    /// `(N, Σ_{2^{N-1} <= l < 2^N} |a_l|² σ_l²)`.
    pub blocks: Vec<(u32, f64)>,
    /// Slope of `log₂(E_N 2^{2sN} / 2^N)` against `N`; near zero under the model.
    pub slope_fit: f64,
}

// i^l
fn i_pow(l: usize) -> Complex64 {
    match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl DensityRealization {
    pub fn from_sample(sample: &WaveSample) -> Self {
        Self::new(sample.model(), Arc::clone(sample.coeffs()))
    }

    /// `coeffs[l] = a_l`, `coeffs[0]` ignored.
    pub fn new(model: &RegularityModel, coeffs: Arc<[Complex64]>) -> Self {
        let sigma = (0..coeffs.len()).map(|l| model.weight(l as i64)).collect();
        Self { model: model.clone(), coeffs, sigma }
    }

    pub fn model(&self) -> &RegularityModel {
        &self.model
    }

    pub fn l_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &Arc<[Complex64]> {
        &self.coeffs
    }

    /// `f^{(order)}(φ)` for `order <= 2`.
    pub fn eval(&self, phi: f64, order: u32) -> Result<Complex64> {
        if order > 2 {
            return Err(Error::Domain(format!("derivative order must be <= 2, got {order}")));
        }
        Ok(self.eval_all(phi)[order as usize])
    }

    /// `[f, f', f'']` at `φ`.
    pub fn eval_all(&self, phi: f64) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let step = Complex64::from_polar(1.0, phi);
        let mut e = Complex64::new(1.0, 0.0);
        for l in 1..=self.l_max() {
            e *= step;
            if l % 64 == 0 {
                e = Complex64::from_polar(1.0, l as f64 * phi);
            }
            let z = self.coeffs[l] * e;
            let lf = l as f64;
            let c = i_pow(l) * (self.sigma[l] / PI);
            // d/dφ Re(a e^{ilφ}) = -l Im(a e^{ilφ})
            out[0] += c * z.re;
            out[1] += c * (-lf * z.im);
            out[2] += c * (-lf * lf * z.re);
        }
        out
    }

    /// `f` and `f'` on the uniform grid `φ_k = 2πk/n`, by FFT. Needs `n > 2 l_max`.
    pub fn grid(&self, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        assert!(n > 2 * self.l_max(), "grid too coarse for the bandwidth");
        let fft = FftPlanner::new().plan_fft_inverse(n);
        let mut f = vec![Complex64::new(0.0, 0.0); n];
        let mut fp = vec![Complex64::new(0.0, 0.0); n];
        let i = Complex64::new(0.0, 1.0);
        for l in 1..=self.l_max() {
            let c = i_pow(l) * (self.sigma[l] / TAU);
            let a = self.coeffs[l];
            let lf = l as f64;
            f[l] += c * a;
            f[n - l] += c * a.conj();
            fp[l] += c * a * i * lf;
            fp[n - l] += c * a.conj() * (-i * lf);
        }
        fft.process(&mut f);
        fft.process(&mut fp);
        (f, fp)
    }

    // h = (|f|²)' and h'
    fn h_and_dh(&self, phi: f64) -> (f64, f64) {
        let [f, fp, fpp] = self.eval_all(phi);
        let h = 2.0 * (f.conj() * fp).re;
        let dh = 2.0 * (fp.norm_sqr() + (f.conj() * fpp).re);
        (h, dh)
    }

    /// Critical points of `|f|` as zeros of `(|f|²)' = 2 Re(conj(f) f')`.
    pub fn critical_points(&self) -> DensityCriticalPoints {
        let n = (64 * self.l_max()).max(4096);
        let (f, fp) = self.grid(n);
        let hs: Vec<f64> = f.iter().zip(&fp).map(|(a, b)| 2.0 * (a.conj() * b).re).collect();
        let dphi = TAU / n as f64;
        let grid_min = f.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let fscale = f.iter().zip(&fp).map(|(a, b)| a.norm_sqr() + b.norm_sqr() / self.l_max().max(1) as f64)
            .fold(0.0, f64::max);
        let mut locations = Vec::new();
        let mut degenerate = false;
        let mut min_abs_f = grid_min;
        for k in 0..n {
            let (h0, h1) = (hs[k], hs[(k + 1) % n]);
            if h0 == 0.0 || ((h0 < 0.0) != (h1 < 0.0) && h1 != 0.0) {
                let (mut a, mut b) = (k as f64 * dphi, (k + 1) as f64 * dphi);
                let mut ha = h0;
                let mut x = if h0 == 0.0 { a } else { 0.5 * (a + b) };
                if h0 != 0.0 {
                    for _ in 0..100 {
                        let (hx, dhx) = self.h_and_dh(x);
                        if hx == 0.0 {
                            break;
                        }
                        if (hx < 0.0) == (ha < 0.0) {
                            a = x;
                            ha = hx;
                        } else {
                            b = x;
                        }
                        let step = hx / dhx;
                        if step.abs() < 1e-15 {
                            break;
                        }
                        let newton = x - step;
                        x = if newton >= a && newton <= b { newton } else { 0.5 * (a + b) };
                        if b - a < 1e-15 * TAU.max(x.abs()) {
                            break;
                        }
                    }
                }
                let (_, dh) = self.h_and_dh(x);
                let lf = self.l_max() as f64;
                if dh.abs() < 1e-8 * fscale * lf * lf {
                    degenerate = true;
                }
                min_abs_f = min_abs_f.min(self.eval_all(x)[0].norm());
                locations.push(x.rem_euclid(TAU));
            }
        }
        DensityCriticalPoints {
            count: locations.len(),
            locations,
            min_abs_f,
            vanishing_warning: min_abs_f < NONVANISHING_TOL,
            degenerate,
        }
    }

    /// `Σ_{l ∈ Λ_N} l^{2 sigma} σ_l² |a_l|²` for `N = 1..=n_blocks`, `Λ_N = [2^{N-1}, 2^N)`.
    pub fn block_sums(&self, n_blocks: u32, sigma: f64) -> Result<Vec<f64>> {
        let needed = (1usize << n_blocks) - 1;
        if self.l_max() < needed {
            return Err(Error::Precondition(format!(
                "{n_blocks} dyadic blocks need l_max >= {needed}, got {}",
                self.l_max()
            )));
        }
        Ok((1..=n_blocks)
            .map(|n| {
                let lo = 1usize << (n - 1);
                let hi = 1usize << n;
                (lo..hi)
                    .map(|l| (l as f64).powf(2.0 * sigma) * self.sigma[l].powi(2) * self.coeffs[l].norm_sqr())
                    .sum()
            })
            .collect())
    }

    pub fn dyadic_profile(&self, n_blocks: u32) -> Result<DyadicProfile> {
        if n_blocks < 5 {
            return Err(Error::Precondition(format!("need at least 5 blocks, got {n_blocks}")));
        }
        let sums = self.block_sums(n_blocks, 0.0)?;
        let s = self.model.s();
        let blocks: Vec<(u32, f64)> = sums.iter().enumerate().map(|(i, &e)| (i as u32 + 1, e)).collect();
        let pts: Vec<(f64, f64)> = blocks
            .iter()
            .filter(|(_, e)| *e > 0.0)
            .map(|&(n, e)| (n as f64, e.log2() + n as f64 * (2.0 * s - 1.0)))
            .collect();
        Ok(DyadicProfile { blocks, slope_fit: least_squares(&pts).0 })
    }
}

/// `(slope, intercept, rms residual)` of a straight-line fit.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Growth exponent of pooled dyadic block sums at Sobolev index `sigma`.
///
/// Block sums are averaged over the realisations and fitted as `log₂` against `N`
/// over `N >= min_block`. Under the model the exponent is `2 sigma - 2s + 1`.
pub fn pooled_block_exponent(
    realizations: &[DensityRealization],
    n_blocks: u32,
    sigma: f64,
    min_block: u32,
) -> Result<f64> {
    if realizations.is_empty() {
        return Err(Error::Precondition("no realisations to pool".into()));
    }
    if min_block + 2 > n_blocks {
        return Err(Error::Precondition("need at least three blocks to fit".into()));
    }
    let mut pooled = vec![0.0; n_blocks as usize];
    for d in realizations {
        for (p, v) in pooled.iter_mut().zip(d.block_sums(n_blocks, sigma)?) {
            *p += v / realizations.len() as f64;
        }
    }
    let pts: Vec<(f64, f64)> = pooled
        .iter()
        .enumerate()
        .filter(|(i, _)| *i as u32 + 1 >= min_block)
        .map(|(i, &v)| ((i + 1) as f64, v.log2()))
        .collect();
    Ok(least_squares(&pts).0)
}
