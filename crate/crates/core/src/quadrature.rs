//! One-dimensional quadrature rules used across the crate.
//!
//! * [`tanh_sinh`] for finite intervals with integrable endpoint singularities.
//! * [`gauss_kronrod`] adaptive G7/K15 for smooth, possibly oscillatory integrands.
//! * [`periodic_trapezoid`] for smooth periodic integrands over one period, where the
//!   trapezoid rule converges geometrically.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Double-exponential (tanh-sinh) rule on `[a, b]`.
///
/// The integrand is never evaluated at the endpoints themselves. For integrands that
/// are singular at an endpoint prefer [`tanh_sinh_offsets`], which hands over the
/// distances to both endpoints without cancellation.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> QuadResult {
    tanh_sinh_offsets(|x, _, _| f(x), a, b, rel_tol)
}

/// Tanh-sinh with integrand `f(x, x - a, b - x)`; the two offsets are computed from
/// the node parameter directly and keep full relative precision near the endpoints.
pub fn tanh_sinh_offsets<F: FnMut(f64, f64, f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> QuadResult {
    const T_MAX: f64 = 4.0;
    const MAX_LEVEL: usize = 10;
    let half = 0.5 * (b - a);
    if half == 0.0 {
        return QuadResult { value: 0.0, error: 0.0, evaluations: 0, converged: true };
    }
    let mut evaluations = 0usize;
    let mut eval_pair = |t: f64, f: &mut F| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        if t == 0.0 {
            evaluations += 1;
            return w * f(a + half, half, half);
        }
        // distance from the nearest endpoint in units of `half`
        let delta = 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let d = half * delta;
        if d == 0.0 || w == 0.0 {
            return 0.0;
        }
        let far = 2.0 * half - d;
        evaluations += 2;
        w * (f(b - d, far, d) + f(a + d, d, far))
    };

    let mut h = 1.0;
    let mut sum = eval_pair(0.0, &mut f);
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        sum += eval_pair(k as f64 * h, &mut f);
        k += 1;
    }
    let mut estimate = sum * h * half;
    let mut error = f64::INFINITY;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            sum += eval_pair(k as f64 * h, &mut f);
            k += 2;
        }
        let next = sum * h * half;
        error = (next - estimate).abs();
        estimate = next;
        if error <= rel_tol * estimate.abs() || error < 1e-300 {
            return QuadResult { value: estimate, error, evaluations, converged: true };
        }
    }
    QuadResult { value: estimate, error, evaluations, converged: false }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

#[derive(PartialEq)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature.
///
/// The interval is first split into `initial_pieces` equal parts; this matters for
/// oscillatory integrands whose period is much shorter than `b - a`.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    initial_pieces: usize,
    max_segments: usize,
) -> QuadResult {
    let pieces = initial_pieces.max(1);
    let mut heap = BinaryHeap::with_capacity(max_segments + pieces);
    let mut total = 0.0;
    let mut total_err = 0.0;
    let step = (b - a) / pieces as f64;
    for i in 0..pieces {
        let lo = a + step * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + step };
        let (value, error) = kronrod15(&mut f, lo, hi);
        total += value;
        total_err += error;
        heap.push(Segment { a: lo, b: hi, value, error });
    }
    let mut evaluations = 15 * pieces;
    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < max_segments {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = kronrod15(&mut f, worst.a, mid);
        let (v2, e2) = kronrod15(&mut f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // recompute from the leaves to shed accumulated cancellation in the running sums
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    QuadResult {
        value,
        error,
        evaluations,
        converged: error <= abs_tol.max(rel_tol * value.abs()),
    }
}

/// Trapezoid rule over one period `[0, period)` with `n` nodes.
pub fn periodic_trapezoid<F: FnMut(f64) -> f64>(mut f: F, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<f64>() * h
}

/// Periodic trapezoid rule with node doubling until two successive estimates agree.
pub fn periodic_trapezoid_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    period: f64,
    rel_tol: f64,
) -> QuadResult {
    let mut n = 16usize;
    let mut sum: f64 = (0..n).map(|k| f(k as f64 * period / n as f64)).sum();
    let mut estimate = sum * period / n as f64;
    let mut evaluations = n;
    while n < 1 << 16 {
        // new nodes sit at the midpoints of the old ones
        let h = period / n as f64;
        sum += (0..n).map(|k| f((k as f64 + 0.5) * h)).sum::<f64>();
        evaluations += n;
        n *= 2;
        let next = sum * period / n as f64;
        let error = (next - estimate).abs();
        estimate = next;
        if error <= rel_tol * estimate.abs() {
            return QuadResult { value: estimate, error, evaluations, converged: true };
        }
    }
    QuadResult { value: estimate, error: f64::NAN, evaluations, converged: false }
}
