//! Monte-Carlo estimators built on the critical-point search.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use super::{find_critical_points, CriticalKind, SearchParams, WaveSample};
use crate::density::{least_squares, DensityRealization};
use crate::error::{Error, Result};
use crate::regularity::RegularityModel;
use crate::rng::sample_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    pub seed: u64,
    pub s: f64,
    pub radius: f64,
    pub l_max: usize,
    pub n_critical: usize,
    pub n_saddle: usize,
    pub n_extremum: usize,
    pub n_degenerate: usize,
    pub wall_time: f64,
}

/// Truncation used for a disk of radius `radius`: `ceil(1.5 R) + 32`.
pub fn l_max_for_radius(radius: f64) -> usize {
    (1.5 * radius).ceil() as usize + 32
}

fn check_l_max(radius: f64, l_max: usize) -> Result<()> {
    let need = l_max_for_radius(radius);
    if l_max < need {
        return Err(Error::Precondition(format!(
            "l_max = {l_max} truncates modes that matter inside R = {radius}; need >= {need}"
        )));
    }
    Ok(())
}

pub fn count_record(sample: &WaveSample, radius: f64, params: &SearchParams) -> Result<CountRecord> {
    let start = Instant::now();
    let pts = find_critical_points(sample, radius, params)?;
    let count = |k| pts.iter().filter(|p| p.kind == k).count();
    Ok(CountRecord {
        seed: sample.seed(),
        s: sample.model().s(),
        radius,
        l_max: sample.l_max(),
        n_critical: pts.len(),
        n_saddle: count(CriticalKind::Saddle),
        n_extremum: count(CriticalKind::Extremum),
        n_degenerate: count(CriticalKind::Degenerate),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalExpectation {
    pub mean: f64,
    pub std_error: f64,
    /// One record per sample, in sample-index order.
    pub records: Vec<CountRecord>,
}

/// Records for samples `0..n_samples` of the run keyed by `master_seed`, in index order.
pub fn simulate_counts(
    model: &RegularityModel,
    radius: f64,
    n_samples: usize,
    master_seed: u64,
    l_max: usize,
    params: &SearchParams,
) -> Result<Vec<CountRecord>> {
    check_l_max(radius, l_max)?;
    params.validate()?;
    (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let sample = WaveSample::sample(model, sample_seed(master_seed, i), l_max)?;
            count_record(&sample, radius, params)
        })
        .collect()
}

/// Mean and standard error of the number of critical points in `B_R`.
pub fn empirical_expectation(
    model: &RegularityModel,
    radius: f64,
    n_samples: usize,
    master_seed: u64,
    l_max: usize,
    params: &SearchParams,
) -> Result<EmpiricalExpectation> {
    if n_samples < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    let records = simulate_counts(model, radius, n_samples, master_seed, l_max, params)?;
    let counts: Vec<f64> = records.iter().map(|r| r.n_critical as f64).collect();
    let (mean, se) = mean_and_se(&counts);
    Ok(EmpiricalExpectation { mean, std_error: se, records })
}

pub(crate) fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub e_hat: f64,
    pub kappa_hat: f64,
    /// RMS residual of the log-log fit.
    pub fit_residual: f64,
    /// `(R, mean count)` per radius.
    pub means: Vec<(f64, f64)>,
}

/// Least-squares fit of `log E N` against `log R`.
pub fn exponent_fit(
    model: &RegularityModel,
    radii: &[f64],
    n_samples: usize,
    master_seed: u64,
    params: &SearchParams,
) -> Result<ExponentFit> {
    if radii.len() < 4 {
        return Err(Error::Precondition(format!("need at least 4 radii, got {}", radii.len())));
    }
    let (lo, hi) = radii.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    if hi < 4.0 * lo {
        return Err(Error::Precondition("radii must span at least a factor 4".into()));
    }
    let mut means = Vec::with_capacity(radii.len());
    for &r in radii {
        let e = empirical_expectation(model, r, n_samples, master_seed, l_max_for_radius(r), params)?;
        means.push((r, e.mean));
    }
    let pts: Vec<(f64, f64)> = means.iter().map(|&(r, m)| (r.ln(), m.ln())).collect();
    let (slope, intercept, residual) = least_squares(&pts);
    Ok(ExponentFit { e_hat: slope, kappa_hat: intercept.exp(), fit_residual: residual, means })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearLaw {
    /// `π N(∇u, R) / (R N(|f|'))`.
    pub ratio: f64,
    pub n_critical: usize,
    pub n_f_crit: usize,
    pub min_abs_f: f64,
    /// `|f|` (nearly) vanishes, so the linear law's hypotheses fail.
    pub vanishing_warning: bool,
}

/// Per-sample check of the almost-sure linear growth at high regularity.
pub fn linear_law_per_sample(sample: &WaveSample, radius: f64, params: &SearchParams) -> Result<LinearLaw> {
    if !(sample.model().s() > 5.0) {
        return Err(Error::Precondition(format!("linear law needs s > 5, got {}", sample.model().s())));
    }
    if !(radius >= 40.0) {
        return Err(Error::Precondition(format!("linear law needs R >= 40, got {radius}")));
    }
    let pts = find_critical_points(sample, radius, params)?;
    let crit = DensityRealization::from_sample(sample).critical_points();
    let ratio = if crit.count == 0 { f64::NAN } else { PI * pts.len() as f64 / (radius * crit.count as f64) };
    Ok(LinearLaw {
        ratio,
        n_critical: pts.len(),
        n_f_crit: crit.count,
        min_abs_f: crit.min_abs_f,
        vanishing_warning: crit.vanishing_warning,
    })
}
