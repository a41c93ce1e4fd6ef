//! Far-field structure: away from the origin `u` is governed by the density `f`, and
//! each critical point `φ*` of `|f|` spawns one critical point of `u` per half period
//! near `(r, θ) = (πn + π/4 + arg f(φ*), φ*)`.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use super::{CriticalPoint, WaveSample};
use crate::density::DensityRealization;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldPrediction {
    pub n: i64,
    pub phi_star: f64,
    pub r_pred: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldMatch {
    pub n: i64,
    pub phi_star: f64,
    pub r_pred: f64,
    pub r_found: f64,
    pub theta_found: f64,
    /// `|Δθ| + |Δr|`, with `Δθ` wrapped to `(-π, π]`.
    pub distance: f64,
}

/// `sqrt(8π/r) (f_R cos(r - π/4) + f_I sin(r - π/4))` at `(r, θ)`.
pub fn far_field_amplitude(density: &DensityRealization, r: f64, theta: f64) -> f64 {
    let f = density.eval_all(theta)[0];
    let (s, c) = (r - FRAC_PI_4).sin_cos();
    (8.0 * PI / r).sqrt() * (f.re * c + f.im * s)
}

/// Predicted critical points for `n` in `n_lo..=n_hi`.
///
/// Critical points of `|f|` where `|f|` nearly vanishes or `(|f|²)''` nearly vanishes
/// produce no predictions.
pub fn far_field_predict(sample: &WaveSample, n_lo: i64, n_hi: i64) -> Result<Vec<FarFieldPrediction>> {
    if !(sample.model().s() > 5.0) {
        return Err(Error::Precondition(format!(
            "far-field prediction needs s > 5, got {}",
            sample.model().s()
        )));
    }
    let density = DensityRealization::from_sample(sample);
    let crit = density.critical_points();
    let scale = crit
        .locations
        .iter()
        .map(|&p| density.eval_all(p)[0].norm())
        .fold(0.0, f64::max);
    let mut out = Vec::new();
    for &phi in &crit.locations {
        let [f, fp, fpp] = density.eval_all(phi);
        let curvature = 2.0 * (fp.norm_sqr() + (f.conj() * fpp).re);
        if f.norm() < 1e-6 * scale || curvature.abs() < 1e-10 * scale * scale {
            continue;
        }
        let base = FRAC_PI_4 + f.arg();
        for n in n_lo..=n_hi {
            out.push(FarFieldPrediction { n, phi_star: phi, r_pred: PI * n as f64 + base });
        }
    }
    Ok(out)
}

fn polar_distance(r1: f64, t1: f64, r2: f64, t2: f64) -> f64 {
    let mut dt = (t1 - t2).rem_euclid(TAU);
    if dt > PI {
        dt = TAU - dt;
    }
    dt + (r1 - r2).abs()
}

/// Pair every found critical point with `r > r_lo` with its nearest prediction.
pub fn match_far_field(
    predictions: &[FarFieldPrediction],
    found: &[CriticalPoint],
    r_lo: f64,
) -> Vec<FarFieldMatch> {
    found
        .iter()
        .filter(|p| p.r > r_lo)
        .filter_map(|p| {
            predictions
                .iter()
                .map(|q| (q, polar_distance(p.r, p.theta, q.r_pred, q.phi_star)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(q, d)| FarFieldMatch {
                    n: q.n,
                    phi_star: q.phi_star,
                    r_pred: q.r_pred,
                    r_found: p.r,
                    theta_found: p.theta,
                    distance: d,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::RegularityModel;
    use num_complex::Complex64;

    #[test]
    fn single_mode_far_field_is_exact_asymptotics() {
        let m = RegularityModel::new(6.0);
        let w = WaveSample::from_coeffs(&m, &[Complex64::new(1.0, 0.0)]).unwrap();
        let d = DensityRealization::from_sample(&w);
        let r = 400.0;
        for &th in &[0.0, 0.7, 2.0] {
            let u = w.evaluate(r, th).unwrap().u;
            assert!((u - far_field_amplitude(&d, r, th)).abs() < 1e-3 * (8.0 / (PI * r)).sqrt());
        }
    }

    #[test]
    fn distance_wraps() {
        assert!((polar_distance(1.0, 0.1, 1.0, TAU - 0.1) - 0.2).abs() < 1e-12);
    }
}
