//! Grid-seeded Newton search for zeros of the gradient.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{WaveEval, WaveSample};
use crate::bessel::bessel_block;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchParams {
    /// Grid cells per unit length, radially and along the outer circle.
    pub grid_density: f64,
    /// Acceptance threshold on `|∇u|`.
    pub newton_tol: f64,
    /// Inner radius of the polar annulus; the disk inside it is searched on a
    /// Cartesian grid.
    pub r_min: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Longest Newton step.
    pub max_step: f64,
    /// Points closer than this are merged.
    pub dedup_radius: f64,
    /// A cell is also seeded when `|∇u|` at its centre is below this fraction of the
    /// ring's RMS gradient.
    pub seed_threshold: f64,
    /// `|det H| < degeneracy_tol · |H|²` flags a degenerate point.
    pub degeneracy_tol: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            grid_density: 8.0,
            newton_tol: 1e-10,
            r_min: 0.5,
            max_iter: 50,
            max_halvings: 20,
            max_step: 0.5,
            dedup_radius: 1e-4,
            seed_threshold: 0.1,
            degeneracy_tol: 1e-8,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.grid_density >= 4.0) {
            problems.push(format!("grid_density must be >= 4, got {}", self.grid_density));
        }
        if !(self.r_min >= 0.1) {
            problems.push(format!("r_min must be >= 0.1, got {}", self.r_min));
        }
        if !(self.newton_tol > 0.0) {
            problems.push(format!("newton_tol must be positive, got {}", self.newton_tol));
        }
        if !(self.dedup_radius > 0.0) {
            problems.push(format!("dedup_radius must be positive, got {}", self.dedup_radius));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Precondition(problems.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    Saddle,
    Extremum,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub r: f64,
    /// In `[0, 2π)`.
    pub theta: f64,
    pub kind: CriticalKind,
    pub hessian_det: f64,
    /// `|∇u|` at the accepted point.
    pub residual: f64,
}

impl CriticalPoint {
    pub fn xy(&self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.r * c, self.r * s)
    }
}

// (u_θ/r, u_r) on a full ring via one complex FFT.
struct RingEvaluator {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl RingEvaluator {
    fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(n);
        let scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        Self { n, fft, buf: vec![Complex64::new(0.0, 0.0); n], scratch }
    }

    // Values at θ_k = (k + offset) 2π/n.
    fn ring(&mut self, sample: &WaveSample, r: f64, offset: f64) -> Result<Vec<[f64; 2]>> {
        let l_max = sample.l_max();
        let block = bessel_block(r, l_max.max(2))?;
        let (j, jp) = (block.j(), block.jp());
        self.buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let i = Complex64::new(0.0, 1.0);
        for l in 1..=l_max {
            let shift = Complex64::from_polar(1.0, TAU * offset * l as f64 / self.n as f64);
            let w = sample.weighted(l) * shift;
            // Re of Σ α_l e^{ilθ} in the real channel, Re of Σ β_l e^{ilθ} in the imaginary one
            let alpha = w * i * (l as f64 * j[l] / r);
            let beta = w * jp[l];
            self.buf[l] += 0.5 * (alpha + i * beta);
            self.buf[self.n - l] += 0.5 * (alpha.conj() + i * beta.conj());
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        Ok(self.buf.iter().map(|z| [z.re, z.im]).collect())
    }
}

// Zero of the bilinear model through the corners lies within one cell of the centre.
fn linear_zero_nearby(corners: &[[f64; 2]; 4], c: [f64; 2]) -> bool {
    let [a, b, p, q] = corners;
    let d_xi = [0.5 * (p[0] + q[0] - a[0] - b[0]), 0.5 * (p[1] + q[1] - a[1] - b[1])];
    let d_eta = [0.5 * (b[0] + q[0] - a[0] - p[0]), 0.5 * (b[1] + q[1] - a[1] - p[1])];
    let det = d_xi[0] * d_eta[1] - d_eta[0] * d_xi[1];
    if det == 0.0 {
        return false;
    }
    let xi = -(d_eta[1] * c[0] - d_eta[0] * c[1]) / det;
    let eta = -(-d_xi[1] * c[0] + d_xi[0] * c[1]) / det;
    xi.abs() <= 1.0 && eta.abs() <= 1.0
}

fn straddles(values: [f64; 4]) -> bool {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    lo <= 0.0 && hi >= 0.0
}

/// Angle reduced to `[0, 2π)`.
pub(crate) fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn eval_xy(sample: &WaveSample, x: f64, y: f64) -> Result<WaveEval> {
    let r = x.hypot(y).max(1e-9);
    let theta = wrap_angle(y.atan2(x));
    sample.evaluate(r, theta)
}

// Damped Newton on the Cartesian gradient. Gives up once the iterate leaves the disk
// of radius `reach` around the seed: such a seed belongs to some other cell's root.
fn newton(sample: &WaveSample, x0: f64, y0: f64, reach: f64, p: &SearchParams) -> Option<(f64, f64, WaveEval)> {
    let (mut x, mut y) = (x0, y0);
    let mut ev = eval_xy(sample, x, y).ok()?;
    let (mut g, mut h) = ev.cartesian();
    let mut gn = g[0].hypot(g[1]);
    for _ in 0..p.max_iter {
        if gn < p.newton_tol {
            return Some((x, y, ev));
        }
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut dx = -(h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let mut dy = -(-h[1][0] * g[0] + h[0][0] * g[1]) / det;
        let len = dx.hypot(dy);
        if len > p.max_step {
            dx *= p.max_step / len;
            dy *= p.max_step / len;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=p.max_halvings {
            let (nx, ny) = (x + t * dx, y + t * dy);
            let nev = eval_xy(sample, nx, ny).ok()?;
            let (ng, nh) = nev.cartesian();
            let nn = ng[0].hypot(ng[1]);
            if nn < gn {
                (x, y, ev, g, h, gn) = (nx, ny, nev, ng, nh, nn);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || (x - x0).hypot(y - y0) > reach {
            return None;
        }
    }
    (gn < p.newton_tol).then_some((x, y, ev))
}

struct Dedup {
    cell: f64,
    radius: f64,
    buckets: HashMap<(i64, i64), Vec<(f64, f64)>>,
}

impl Dedup {
    fn new(radius: f64) -> Self {
        Self { cell: radius, radius, buckets: HashMap::new() }
    }

    fn key(&self, x: f64, y: f64) -> (i64, i64) {
        ((x / self.cell).floor() as i64, (y / self.cell).floor() as i64)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let (bx, by) = self.key(x, y);
        (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                self.buckets
                    .get(&(bx + dx, by + dy))
                    .is_some_and(|v| v.iter().any(|&(px, py)| (px - x).hypot(py - y) < self.radius))
            })
        })
    }

    // true if the point is new
    fn insert(&mut self, x: f64, y: f64) -> bool {
        if self.contains(x, y) {
            return false;
        }
        let key = self.key(x, y);
        self.buckets.entry(key).or_default().push((x, y));
        true
    }
}

/// All critical points of `u` in the closed disk of radius `radius`.
///
/// Cells of a polar grid over `[r_min, radius]` seed Newton iterations when both
/// gradient components change sign across the cell or the gradient at the centre is
/// small; the inner disk is seeded from a Cartesian grid. Non-converging seeds are
/// dropped.
pub fn find_critical_points(sample: &WaveSample, radius: f64, params: &SearchParams) -> Result<Vec<CriticalPoint>> {
    params.validate()?;
    if !(radius > params.r_min) || !radius.is_finite() {
        return Err(Error::Precondition(format!(
            "radius must exceed r_min = {}, got {radius}",
            params.r_min
        )));
    }
    if sample.is_zero() {
        return Err(Error::DegenerateSample);
    }
    let density = params.grid_density;
    let l_max = sample.l_max();
    let n_theta = ((TAU * radius * density).ceil() as usize).max(2 * l_max + 2);
    let n_r = ((radius - params.r_min) * density).ceil() as usize;
    let h = (radius - params.r_min) / n_r as f64;
    let mut rings = RingEvaluator::new(n_theta);
    let dtheta = TAU / n_theta as f64;

    // sign-change seeds are always tried; threshold seeds only away from known points
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    let mut weak_seeds: Vec<(f64, f64)> = Vec::new();
    let mut lower = rings.ring(sample, params.r_min, 0.0)?;
    for i in 0..n_r {
        let r_lo = params.r_min + i as f64 * h;
        let r_hi = if i + 1 == n_r { radius } else { r_lo + h };
        let upper = rings.ring(sample, r_hi, 0.0)?;
        let r_c = 0.5 * (r_lo + r_hi);
        let centre = rings.ring(sample, r_c, 0.5)?;
        let rms = (centre.iter().map(|v| v[0] * v[0] + v[1] * v[1]).sum::<f64>() / n_theta as f64).sqrt();
        for k in 0..n_theta {
            let k1 = (k + 1) % n_theta;
            let corners = [lower[k], lower[k1], upper[k], upper[k1]];
            let both = (0..2).all(|c| straddles(corners.map(|v| v[c])));
            let c = centre[k];
            let c_norm = c[0].hypot(c[1]);
            let small = c_norm < params.seed_threshold * rms && linear_zero_nearby(&corners, c);
            if both || small {
                let th = (k as f64 + 0.5) * dtheta;
                let seed = (r_c * th.cos(), r_c * th.sin());
                if both {
                    seeds.push(seed);
                } else {
                    weak_seeds.push(seed);
                }
            }
        }
        lower = upper;
    }
    let step = 0.5 / density;
    let m = ((params.r_min + h) / step).ceil() as i64;
    for a in -m..=m {
        for b in -m..=m {
            let (x, y) = (a as f64 * step, b as f64 * step);
            if x.hypot(y) <= params.r_min + h {
                seeds.push((x, y));
            }
        }
    }

    let mut dedup = Dedup::new(params.dedup_radius);
    let cell = h.max(radius * dtheta);
    let mut near = Dedup::new(2.0 * cell);
    let mut out = Vec::new();
    let n_strong = seeds.len();
    seeds.extend(weak_seeds);
    for (idx, (x0, y0)) in seeds.into_iter().enumerate() {
        if idx >= n_strong && near.contains(x0, y0) {
            continue;
        }
        let reach = if idx >= n_strong { 2.0 * cell } else { 4.0 * cell };
        let Some((x, y, ev)) = newton(sample, x0, y0, reach, params) else { continue };
        let r = x.hypot(y);
        if r > radius || !dedup.insert(x, y) {
            continue;
        }
        near.insert(x, y);
        let (g, hs) = ev.cartesian();
        let det = hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0];
        let scale = hs[0][0] * hs[0][0] + 2.0 * hs[0][1] * hs[0][1] + hs[1][1] * hs[1][1];
        let kind = if det.abs() < params.degeneracy_tol * scale {
            CriticalKind::Degenerate
        } else if det < 0.0 {
            CriticalKind::Saddle
        } else {
            CriticalKind::Extremum
        };
        out.push(CriticalPoint {
            r,
            theta: wrap_angle(y.atan2(x)),
            kind,
            hessian_det: det,
            residual: g[0].hypot(g[1]),
        });
    }
    out.sort_by(|a, b| a.r.total_cmp(&b.r).then(a.theta.total_cmp(&b.theta)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::RegularityModel;

    #[test]
    fn ring_matches_pointwise() {
        let m = RegularityModel::new(0.0);
        let w = WaveSample::sample(&m, 3, 40).unwrap();
        let mut ev = RingEvaluator::new(128);
        let ring = ev.ring(&w, 7.3, 0.5).unwrap();
        for k in [0usize, 17, 99] {
            let th = (k as f64 + 0.5) * TAU / 128.0;
            let e = w.evaluate(7.3, th).unwrap();
            assert!((ring[k][0] - e.du[0] / 7.3).abs() < 1e-12);
            assert!((ring[k][1] - e.du[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_sample_rejected() {
        let m = RegularityModel::new(0.0);
        let w = WaveSample::from_coeffs(&m, &[Complex64::new(0.0, 0.0); 10]).unwrap();
        assert_eq!(find_critical_points(&w, 5.0, &SearchParams::default()), Err(Error::DegenerateSample));
    }

    #[test]
    fn points_are_critical_and_unique() {
        let m = RegularityModel::new(0.0);
        let w = WaveSample::sample(&m, 1, 50).unwrap();
        let pts = find_critical_points(&w, 10.0, &SearchParams::default()).unwrap();
        assert!(!pts.is_empty());
        for (i, p) in pts.iter().enumerate() {
            assert!(p.residual < 1e-10 && p.r <= 10.0);
            for q in &pts[i + 1..] {
                let (a, b) = (p.xy(), q.xy());
                assert!((a.0 - b.0).hypot(a.1 - b.1) >= 1e-4);
            }
        }
    }
}
