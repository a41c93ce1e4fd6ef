//! Integer-order Bessel functions `J_l(r)`, `J'_l(r)`, `J''_l(r)` for `l = 0..=L`.
//!
//! Values come from Miller's backward recurrence
//! `J_{l-1} = (2l/r) J_l - J_{l+1}`, started well above `max(L, r)` and normalised with
//! the two sums `J_0 + 2 Σ J_{2k} = 1` (sign) and `J_0² + 2 Σ J_l² = 1` (magnitude).
//! Derivatives follow from `2 J'_l = J_{l-1} - J_{l+1}` and
//! `4 J''_l = J_{l+2} + J_{l-2} - 2 J_l`, using `J_{-k} = (-1)^k J_k`.

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// `J_l`, `J'_l`, `J''_l` for `0 <= l <= max_order` at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselBlock {
    radius: f64,
    j: Vec<f64>,
    jp: Vec<f64>,
    jpp: Vec<f64>,
    tail_bound: f64,
}

impl BesselBlock {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn max_order(&self) -> usize {
        self.j.len() - 1
    }

    /// `J_l(r)` for `0 <= l <= max_order`.
    pub fn j(&self) -> &[f64] {
        &self.j
    }

    pub fn jp(&self) -> &[f64] {
        &self.jp
    }

    pub fn jpp(&self) -> &[f64] {
        &self.jpp
    }

    /// Upper bound for `2 Σ_{l > L} J_l(r)²` from `|J_l(r)| <= r^l / (2^l l!)`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `J_l` for any integer `l`, zero beyond the computed range.
    pub fn j_signed(&self, l: i64) -> f64 {
        let n = l.unsigned_abs() as usize;
        let v = self.j.get(n).copied().unwrap_or(0.0);
        if l < 0 && n % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// `ln( r^l / (2^l l!) )`, the log of the standard bound on `|J_l(r)|`.
pub fn ln_decay_bound(r: f64, l: usize) -> f64 {
    if l == 0 {
        return 0.0;
    }
    l as f64 * (0.5 * r).ln() - ln_gamma(l as f64 + 1.0)
}

/// `Σ_{l > from} weight_sq(l) · bound(l + shift_a) · bound(l + shift_b)` evaluated in
/// log space. Shifts may be negative; the bound is capped at 1 (since `|J_l| <= 1`).
pub(crate) fn tail_sum<W: Fn(usize) -> f64>(
    r: f64,
    from: usize,
    shift_a: i64,
    shift_b: i64,
    weight_sq: W,
) -> f64 {
    let ln_b = |l: i64| -> f64 { ln_decay_bound(r, l.unsigned_abs() as usize).min(0.0) };
    let mut total = 0.0;
    let mut l = from + 1;
    // beyond e r / 2 the bound decays faster than geometrically
    let settled = from.max((0.5 * std::f64::consts::E * r).ceil() as usize) + 8;
    loop {
        let ln_term = ln_b(l as i64 + shift_a) + ln_b(l as i64 + shift_b);
        let w = weight_sq(l);
        let term = if w > 0.0 { (ln_term + w.ln()).exp() } else { 0.0 };
        total += term;
        if l > settled && (term == 0.0 || term <= 1e-20 * total) {
            break;
        }
        l += 1;
    }
    total
}

/// Number of guard orders above `max(max_order, r)` for the backward recurrence.
fn guard_orders(r: f64, max_order: usize) -> usize {
    (10.0 + 2.0 * r.max(max_order as f64).sqrt()).ceil() as usize
}

/// Evaluate `J_l(r)` and its first two derivatives for `l = 0..=max_order`.
pub fn bessel_block(r: f64, max_order: usize) -> Result<BesselBlock> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("bessel_block needs r > 0, got {r}")));
    }
    if max_order < 2 {
        return Err(Error::Precondition(format!("bessel_block needs max_order >= 2, got {max_order}")));
    }
    let needed = max_order + 2;
    let base = needed.max(r.ceil() as usize);
    let start = base + guard_orders(r, base);
    let raw = backward_recurrence(r, start);

    let mut j: Vec<f64> = raw[..=needed].to_vec();
    let jm = |l: i64, j: &[f64]| -> f64 {
        let n = l.unsigned_abs() as usize;
        if l < 0 && n % 2 == 1 {
            -j[n]
        } else {
            j[n]
        }
    };
    let mut jp = Vec::with_capacity(max_order + 1);
    let mut jpp = Vec::with_capacity(max_order + 1);
    for l in 0..=max_order as i64 {
        jp.push(0.5 * (jm(l - 1, &j) - jm(l + 1, &j)));
        jpp.push(0.25 * (jm(l + 2, &j) + jm(l - 2, &j) - 2.0 * jm(l, &j)));
    }
    j.truncate(max_order + 1);
    let tail_bound = 2.0 * tail_sum(r, max_order, 0, 0, |_| 1.0);
    Ok(BesselBlock { radius: r, j, jp, jpp, tail_bound })
}

// Normalised J_0..=J_start(r).
fn backward_recurrence(r: f64, start: usize) -> Vec<f64> {
    const BIG: f64 = 1e250;
    let mut v = vec![0.0; start + 2];
    v[start] = 1e-30;
    for l in (1..=start).rev() {
        let next = (2.0 * l as f64 / r) * v[l] - v[l + 1];
        v[l - 1] = next;
        if next.abs() > BIG {
            let scale = 1.0 / BIG;
            for x in &mut v[l - 1..] {
                *x *= scale;
            }
        }
    }
    v.truncate(start + 1);
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut sign_sum = v[0] / peak;
    let mut sq_sum = (v[0] / peak).powi(2);
    for (l, x) in v.iter().enumerate().skip(1) {
        let y = x / peak;
        if l % 2 == 0 {
            sign_sum += 2.0 * y;
        }
        sq_sum += 2.0 * y * y;
    }
    let scale = sign_sum.signum() / (peak * sq_sum.sqrt());
    for x in &mut v {
        *x *= scale;
    }
    v
}

/// Smallest `L >= ceil(r) + 16` with `Σ_{l > L} l^{-2s} (r^l / (2^l l!))² < tol`.
pub fn truncation_order(r: f64, s: f64, tol: f64) -> usize {
    truncation_order_with(r, tol, |l| (l as f64).powf(-2.0 * s))
}

pub(crate) fn truncation_order_with<W: Fn(usize) -> f64>(r: f64, tol: f64, weight_sq: W) -> usize {
    let floor = r.ceil() as usize + 16;
    let ln_tol = tol.ln();
    // Start from the first order past the turning point whose term alone is below tol,
    // then walk back towards `floor` while the tail stays below tol.
    let ln_term = |l: usize| 2.0 * ln_decay_bound(r, l).min(0.0) + weight_sq(l).ln();
    let mut hi = floor;
    while !(hi as f64 > 0.5 * std::f64::consts::E * r && ln_term(hi + 1) < ln_tol - 5.0) {
        hi += 1;
    }
    // Suffix sums from `hi` downwards.
    let mut tail = tail_sum(r, hi, 0, 0, &weight_sq);
    while tail >= tol {
        hi += 1;
        tail = tail_sum(r, hi, 0, 0, &weight_sq);
    }
    let mut l = hi;
    while l > floor {
        let candidate = tail + ln_term(l).exp();
        if candidate >= tol {
            break;
        }
        tail = candidate;
        l -= 1;
    }
    l
}

/// The four sums `Σ ε_l J_l²`, `Σ ε_l J'_l²`, `Σ ε_l l² J_l J'_l`, `Σ ε_l l⁴ J_l²`
/// with `ε_0 = 1`, `ε_l = 2` otherwise. Their exact values are given by
/// [`addition_sums_exact`].
pub fn addition_sums(r: f64) -> Result<[f64; 4]> {
    let order = truncation_order_with(r, 1e-18, |l| (l as f64).powi(4));
    let block = bessel_block(r, order)?;
    let (j, jp) = (block.j(), block.jp());
    let mut out = [j[0] * j[0], jp[0] * jp[0], 0.0, 0.0];
    for l in 1..=order {
        let l2 = (l * l) as f64;
        out[0] += 2.0 * j[l] * j[l];
        out[1] += 2.0 * jp[l] * jp[l];
        out[2] += 2.0 * l2 * j[l] * jp[l];
        out[3] += 2.0 * l2 * l2 * j[l] * j[l];
    }
    Ok(out)
}

pub fn addition_sums_exact(r: f64) -> [f64; 4] {
    [1.0, 0.5, r / 2.0, r * r * (4.0 + 3.0 * r * r) / 8.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let b = bessel_block(10.0, 20).unwrap();
        assert!((b.j()[0] - (-0.245_935_764_451_348_3)).abs() < 1e-15);
        assert!((b.j()[1] - 0.043_472_746_168_861_44).abs() < 1e-15);
        assert!((b.j()[10] - 0.207_486_106_633_358_9).abs() < 1e-14);
        let b = bessel_block(1.0, 5).unwrap();
        assert!((b.j()[0] - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((b.j()[5] - 2.497_577_302_112_344e-4).abs() < 1e-18);
    }

    #[test]
    fn derivative_of_j0_is_minus_j1() {
        for &r in &[0.3, 2.0, 17.5, 240.0] {
            let b = bessel_block(r, 4).unwrap();
            assert_eq!(b.jp()[0], -b.j()[1]);
        }
    }

    #[test]
    fn normalisation_at_ten() {
        let b = bessel_block(10.0, 40).unwrap();
        let s: f64 = b.j()[0].powi(2) + 2.0 * b.j()[1..].iter().map(|x| x * x).sum::<f64>();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(s <= 1.0 + 1e-15 && s >= 1.0 - b.tail_bound() - 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(bessel_block(0.0, 5), Err(Error::Domain(_))));
        assert!(matches!(bessel_block(-1.0, 5), Err(Error::Domain(_))));
        assert!(bessel_block(1.0, 1).is_err());
    }

    #[test]
    fn huge_order_underflows_to_zero() {
        let b = bessel_block(0.5, 400).unwrap();
        assert_eq!(b.j()[400], 0.0);
        assert_eq!(b.tail_bound(), 0.0);
    }

    #[test]
    fn truncation_examples() {
        let l = truncation_order(1.0, 0.0, 1e-15);
        assert!((17..=25).contains(&l));
        assert!(truncation_order(10.0, 0.0, 1e-12) >= 10);
        assert!(truncation_order(100.0, 0.0, 1e-16) >= truncation_order(100.0, 0.0, 1e-8));
    }
}
