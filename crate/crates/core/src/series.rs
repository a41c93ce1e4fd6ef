//! Weighted Neumann series of products of Bessel functions,
//! `𝒥_{s,m,m'}(r) = Σ_{l>=1} σ_l² J_{l+m}(r) J_{l+m'}(r)`, and the six products of
//! `J`, `J'`, `J''` that enter the covariance of the wave's derivatives.
//!
//! Every series can be summed directly (with a rigorous truncation bound) or replaced
//! by its large-`r` leading term. The leading terms fall into three regimes,
//! `s < 1/2`, `s = 1/2` and `s > 1/2`.

use std::f64::consts::{LN_2, PI};

use crate::bessel::{bessel_block, tail_sum, truncation_order_with};
use crate::error::{Error, Result};
use crate::regularity::RegularityModel;
use crate::special::{cos_pi, gamma, rgamma, sin_pi, zeta};

/// Values of `s` closer than this to `1/2` are treated as `1/2`.
pub const HALF_TIE: f64 = 1e-12;

/// Default radius below which [`series_asymptotic`] refuses to evaluate.
pub const DEFAULT_ASYMPTOTIC_MIN_RADIUS: f64 = 10.0;

/// Absolute truncation tolerance used by [`derivative_series`] for direct sums.
pub const DIRECT_TOL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Asymptotic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Asymptotic => "asymptotic",
        }
    }
}

/// Which asymptotic regime produced a leading term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeadingOrder {
    /// `c · r^{exponent}`.
    Power { exponent: f64 },
    /// `c · log r / r`.
    LogOverR,
    /// `(c - c' sin(2r - φ)) / r`.
    OscillatoryOverR,
    /// The leading coefficient vanishes at this order (`o(r^{exponent})` or `O(1/r)`
    /// with no resolved constant); the returned value is 0.
    Vanishing { exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AsymptoticRegime {
    BelowHalf,
    Half,
    AboveHalf,
}

pub fn regime(s: f64) -> AsymptoticRegime {
    if (s - 0.5).abs() <= HALF_TIE {
        AsymptoticRegime::Half
    } else if s < 0.5 {
        AsymptoticRegime::BelowHalf
    } else {
        AsymptoticRegime::AboveHalf
    }
}

/// `(model, m, m')` with `μ = m + m'` and `ν = m - m'`.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub model: RegularityModel,
    pub m: u32,
    pub m_prime: u32,
}

impl SeriesSpec {
    pub fn new(model: RegularityModel, m: u32, m_prime: u32) -> Self {
        Self { model, m, m_prime }
    }

    pub fn mu(&self) -> i64 {
        self.m as i64 + self.m_prime as i64
    }

    pub fn nu(&self) -> i64 {
        self.m as i64 - self.m_prime as i64
    }

    pub fn swapped(&self) -> Self {
        Self { model: self.model.clone(), m: self.m_prime, m_prime: self.m }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub method: Method,
    /// Last summed order (direct only).
    pub truncation: Option<usize>,
    /// Bound on the omitted tail (direct only).
    pub tail_bound: Option<f64>,
    /// Regime of the leading term (asymptotic only).
    pub leading_order: Option<LeadingOrder>,
}

impl SeriesValue {
    fn direct(value: f64, truncation: usize, tail_bound: f64) -> Self {
        Self {
            value,
            method: Method::Direct,
            truncation: Some(truncation),
            tail_bound: Some(tail_bound),
            leading_order: None,
        }
    }

    fn asymptotic(value: f64, leading: LeadingOrder) -> Self {
        Self {
            value,
            method: Method::Asymptotic,
            truncation: None,
            tail_bound: None,
            leading_order: Some(leading),
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be positive and finite, got {r}")))
    }
}

/// Direct summation `Σ_{l=1}^{L} σ_l² J_{l+m}(r) J_{l+m'}(r)` with tail bound below `tol`.
pub fn series_direct(spec: &SeriesSpec, r: f64, tol: f64) -> Result<SeriesValue> {
    check_radius(r)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let model = &spec.model;
    let wsq = |l: usize| model.weight_sq(l as i64);
    let mut order = truncation_order_with(r, tol, wsq);
    let mut tail = tail_sum(r, order, spec.m as i64, spec.m_prime as i64, wsq);
    while tail >= tol {
        order += 1;
        tail = tail_sum(r, order, spec.m as i64, spec.m_prime as i64, wsq);
    }
    let shift = spec.m.max(spec.m_prime) as usize;
    let block = bessel_block(r, (order + shift).max(2))?;
    let j = block.j();
    let (m, mp) = (spec.m as usize, spec.m_prime as usize);
    let value = (1..=order).map(|l| wsq(l) * j[l + m] * j[l + mp]).sum();
    Ok(SeriesValue::direct(value, order, tail))
}

/// `c¹_{s,ν} = 2^{2s-1} Γ(1-2s) / (Γ(1-s-ν/2) Γ(1-s+ν/2))`, zero at Gamma poles.
pub fn c1(s: f64, nu: i64) -> f64 {
    let half = nu as f64 / 2.0;
    2f64.powf(2.0 * s - 1.0) * gamma(1.0 - 2.0 * s) * rgamma(1.0 - s - half) * rgamma(1.0 - s + half)
}

pub fn c2(nu: i64) -> f64 {
    cos_pi(nu as f64 / 2.0) / PI
}

pub fn c3(nu: i64) -> f64 {
    0.5 * sin_pi(nu.unsigned_abs() as f64 / 2.0)
}

pub fn c4() -> f64 {
    LN_2 / PI
}

pub fn c5(s: f64, nu: i64) -> f64 {
    zeta(2.0 * s) * cos_pi(nu as f64 / 2.0) / PI
}

/// Independent of `ν`.
pub fn c6(s: f64) -> f64 {
    zeta(2.0 * s) * (1.0 - 2f64.powf(1.0 - 2.0 * s)) / PI
}

pub fn c7(mu: i64) -> f64 {
    PI * mu as f64 / 2.0
}

/// Leading large-`r` term of `𝒥_{s,m,m'}(r)` (default weight only).
pub fn series_asymptotic(spec: &SeriesSpec, r: f64) -> Result<SeriesValue> {
    series_asymptotic_with(spec, r, DEFAULT_ASYMPTOTIC_MIN_RADIUS)
}

/// [`series_asymptotic`] with an explicit validity threshold on `r`.
pub fn series_asymptotic_with(spec: &SeriesSpec, r: f64, min_radius: f64) -> Result<SeriesValue> {
    check_radius(r)?;
    if r < min_radius {
        return Err(Error::Domain(format!(
            "asymptotic evaluation needs r >= {min_radius}, got {r}"
        )));
    }
    if !spec.model.is_default_weight() {
        return Err(Error::Unsupported(
            "closed-form asymptotics exist only for the weight |l|^-s".into(),
        ));
    }
    let s = spec.model.s();
    let (nu, mu) = (spec.nu(), spec.mu());
    let out = match regime(s) {
        AsymptoticRegime::BelowHalf => {
            SeriesValue::asymptotic(c1(s, nu) * r.powf(-2.0 * s), LeadingOrder::Power { exponent: -2.0 * s })
        }
        AsymptoticRegime::Half if nu % 2 == 0 => SeriesValue::asymptotic(c2(nu) * r.ln() / r, LeadingOrder::LogOverR),
        AsymptoticRegime::Half => SeriesValue::asymptotic(
            (c3(nu) - c4() * (2.0 * r - c7(mu)).sin()) / r,
            LeadingOrder::OscillatoryOverR,
        ),
        AsymptoticRegime::AboveHalf => SeriesValue::asymptotic(
            (c5(s, nu) - c6(s) * (2.0 * r - c7(mu)).sin()) / r,
            LeadingOrder::OscillatoryOverR,
        ),
    };
    Ok(out)
}

/// `∫_0^1 λ^{-2s} cos(ν arccos λ) / sqrt(1-λ²) dλ` in closed form, for `s < 1/2`.
pub fn arccos_moment(s: f64, nu: i64) -> Result<f64> {
    if !(s < 0.5) {
        return Err(Error::Domain(format!("arccos_moment needs s < 1/2, got {s}")));
    }
    Ok(PI * c1(s, nu))
}

/// Products of Bessel functions and their derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeKind {
    JJ,
    JJp,
    JpJp,
    JJpp,
    JpJpp,
    JppJpp,
}

impl DerivativeKind {
    pub const ALL: [DerivativeKind; 6] = [
        DerivativeKind::JJ,
        DerivativeKind::JJp,
        DerivativeKind::JpJp,
        DerivativeKind::JJpp,
        DerivativeKind::JpJpp,
        DerivativeKind::JppJpp,
    ];

    /// Derivative orders of the two factors.
    pub fn orders(self) -> (usize, usize) {
        match self {
            DerivativeKind::JJ => (0, 0),
            DerivativeKind::JJp => (0, 1),
            DerivativeKind::JpJp => (1, 1),
            DerivativeKind::JJpp => (0, 2),
            DerivativeKind::JpJpp => (1, 2),
            DerivativeKind::JppJpp => (2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DerivativeKind::JJ => "JJ",
            DerivativeKind::JJp => "JJp",
            DerivativeKind::JpJp => "JpJp",
            DerivativeKind::JJpp => "JJpp",
            DerivativeKind::JpJpp => "JpJpp",
            DerivativeKind::JppJpp => "JppJpp",
        }
    }
}

impl std::str::FromStr for DerivativeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DerivativeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown derivative kind {s:?}")))
    }
}

/// `Σ σ_l² D_a J_l(r) D_b J_l(r)` for the pair of derivative orders in `kind`.
pub fn derivative_series(
    kind: DerivativeKind,
    model: &RegularityModel,
    r: f64,
    method: Method,
) -> Result<SeriesValue> {
    check_radius(r)?;
    match method {
        Method::Direct => derivative_series_direct(kind, model, r, DIRECT_TOL),
        Method::Asymptotic => {
            if r < DEFAULT_ASYMPTOTIC_MIN_RADIUS {
                return Err(Error::Domain(format!(
                    "asymptotic evaluation needs r >= {DEFAULT_ASYMPTOTIC_MIN_RADIUS}, got {r}"
                )));
            }
            if !model.is_default_weight() {
                return Err(Error::Unsupported(
                    "closed-form asymptotics exist only for the weight |l|^-s".into(),
                ));
            }
            let (value, leading) = asymptotic_leading(kind, model.s(), r, r);
            Ok(SeriesValue::asymptotic(value, leading))
        }
    }
}

pub fn derivative_series_direct(
    kind: DerivativeKind,
    model: &RegularityModel,
    r: f64,
    tol: f64,
) -> Result<SeriesValue> {
    let wsq = |l: usize| model.weight_sq(l as i64);
    let (a, b) = kind.orders();
    let (sa, sb) = (-(a as i64), -(b as i64));
    let mut order = truncation_order_with(r, tol, wsq);
    let mut tail = tail_sum(r, order, sa, sb, wsq);
    while tail >= tol {
        order += 1;
        tail = tail_sum(r, order, sa, sb, wsq);
    }
    let block = bessel_block(r, order)?;
    let cols = [block.j(), block.jp(), block.jpp()];
    let (x, y) = (cols[a], cols[b]);
    let value = (1..=order).map(|l| wsq(l) * x[l] * y[l]).sum();
    Ok(SeriesValue::direct(value, order, tail))
}

/// Leading term of the derivative series for the default weight at regularity `s`.
///
/// Powers of `r` use `r`, oscillating factors use `phase` in place of `r`. Passing
/// `phase = r` gives the ordinary leading term; decoupling them lets callers take the
/// `r → ∞` limit of ratios at a fixed phase of `sin 2r`.
pub fn asymptotic_leading(kind: DerivativeKind, s: f64, r: f64, phase: f64) -> (f64, LeadingOrder) {
    use DerivativeKind::*;
    match regime(s) {
        AsymptoticRegime::BelowHalf => {
            let p = r.powf(-2.0 * s);
            let lead = LeadingOrder::Power { exponent: -2.0 * s };
            let jpjp = gamma(0.5 - s) / (4.0 * PI.sqrt() * gamma(2.0 - s));
            match kind {
                JJ => (c1(s, 0) * p, lead),
                JJp | JpJpp => (0.0, LeadingOrder::Vanishing { exponent: -2.0 * s }),
                JpJp => (jpjp * p, lead),
                JJpp => (-jpjp * p, lead),
                JppJpp => {
                    let c = 3.0
                        * 2f64.powf(2.0 * s - 5.0)
                        * (2.0 - 2.0 * s)
                        * (4.0 - 2.0 * s)
                        * gamma(1.0 - 2.0 * s)
                        * rgamma(3.0 - s).powi(2);
                    (c * p, lead)
                }
            }
        }
        AsymptoticRegime::Half => {
            let v = r.ln() / (PI * r);
            match kind {
                JJ | JpJp | JppJpp => (v, LeadingOrder::LogOverR),
                JJpp => (-v, LeadingOrder::LogOverR),
                JJp | JpJpp => (0.0, LeadingOrder::Vanishing { exponent: -1.0 }),
            }
        }
        AsymptoticRegime::AboveHalf => {
            let z = zeta(2.0 * s) / (PI * r);
            let b = 2f64.powf(1.0 - 2.0 * s) - 1.0;
            let (sn, cs) = (2.0 * phase).sin_cos();
            let v = match kind {
                JJ | JppJpp => z * (b * sn + 1.0),
                JJp => z * b * cs,
                JpJp => z * (1.0 - b * sn),
                JJpp => -z * (b * sn + 1.0),
                JpJpp => -z * b * cs,
            };
            (v, LeadingOrder::OscillatoryOverR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::tanh_sinh_offsets;

    fn spec(s: f64, m: u32, mp: u32) -> SeriesSpec {
        SeriesSpec::new(RegularityModel::new(s), m, mp)
    }

    #[test]
    fn vanishes_at_origin() {
        for &s in &[-1.0, 0.0, 0.7, 3.0] {
            let v = series_direct(&spec(s, 0, 0), 1e-8, 1e-15).unwrap();
            assert!(v.value.abs() < 1e-12);
        }
    }

    #[test]
    fn s0_matches_addition_formula() {
        for &r in &[0.5, 3.0, 10.0, 77.7, 300.0] {
            let v = series_direct(&spec(0.0, 0, 0), r, 1e-15).unwrap();
            let j0 = bessel_block(r, 2).unwrap().j()[0];
            assert!((v.value - 0.5 * (1.0 - j0 * j0)).abs() < 1e-11, "r={r}");
            assert!(v.tail_bound.unwrap() < 1e-15);
        }
    }

    #[test]
    fn symmetric_in_m() {
        let a = series_direct(&spec(0.7, 3, 1), 42.0, 1e-14).unwrap();
        let b = series_direct(&spec(0.7, 1, 3), 42.0, 1e-14).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn c1_at_s0_nu0_is_half() {
        assert!((c1(0.0, 0) - 0.5).abs() < 1e-15);
        assert_eq!(c1(0.0, 2), 0.0);
        assert_eq!(c1(-0.5, 5), 0.0);
    }

    #[test]
    fn asymptotic_examples() {
        let v = series_asymptotic(&spec(0.5, 0, 0), 100.0).unwrap();
        assert!((v.value - 100f64.ln() / (100.0 * PI)).abs() < 1e-16);
        let v = series_asymptotic(&spec(1.0, 0, 0), 50.0).unwrap();
        let z2 = PI * PI / 6.0;
        let expect = z2 * (1.0 + (0.5 - 1.0) * (100.0f64).sin()) / (PI * 50.0);
        assert!((v.value - expect).abs() < 1e-15);
        assert!(series_asymptotic(&spec(1.0, 0, 0), 5.0).is_err());
        let custom = SeriesSpec::new(
            RegularityModel::with_weight(1.0, std::sync::Arc::new(|l| 1.0 / l as f64)),
            0,
            0,
        );
        assert!(matches!(series_asymptotic(&custom, 50.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn half_tie_is_treated_as_half() {
        assert_eq!(regime(0.5 + 5e-13), AsymptoticRegime::Half);
        assert_eq!(regime(0.5 - 1e-9), AsymptoticRegime::BelowHalf);
    }

    #[test]
    fn arccos_moment_cases() {
        assert!((arccos_moment(0.0, 0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(arccos_moment(0.0, 2).unwrap(), 0.0);
        assert!(arccos_moment(0.5, 0).is_err());
        let q = tanh_sinh_offsets(
            |x, _, d| x.powf(-0.5) * x / (d * (1.0 + x)).sqrt(),
            0.0,
            1.0,
            1e-12,
        );
        assert!((q.value - arccos_moment(0.25, 1).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn jj_derivative_row_matches_c1() {
        let (v, _) = asymptotic_leading(DerivativeKind::JJ, 0.2, 30.0, 30.0);
        let w = series_asymptotic(&spec(0.2, 0, 0), 30.0).unwrap().value;
        assert!((v - w).abs() < 1e-15);
        let (v, _) = asymptotic_leading(DerivativeKind::JJ, 1.3, 30.0, 30.0);
        let w = series_asymptotic(&spec(1.3, 0, 0), 30.0).unwrap().value;
        assert!((v - w).abs() < 1e-15);
    }

    #[test]
    fn jppjpp_at_s0_is_three_sixteenths() {
        let (v, _) = asymptotic_leading(DerivativeKind::JppJpp, 0.0, 40.0, 40.0);
        assert!((v - 3.0 / 16.0).abs() < 1e-15);
        let d = derivative_series(DerivativeKind::JppJpp, &RegularityModel::new(0.0), 40.0, Method::Direct)
            .unwrap();
        assert!((d.value - v).abs() < 0.1 * v);
    }
}
