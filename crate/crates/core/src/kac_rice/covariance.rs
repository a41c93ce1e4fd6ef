//! Covariances of the polar gradient `Du = (∂_θ u, ∂_r u)` and of the Hessian
//! conditioned on `Du = 0`.

use crate::bessel::{bessel_block, tail_sum, truncation_order_with};
use crate::error::{Error, Result};
use crate::regularity::RegularityModel;
use crate::series::{asymptotic_leading, DerivativeKind, Method};

const SUM_TOL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub r: f64,
    pub sigma_tilde_11: f64,
    pub sigma_tilde_22: f64,
    pub sigma_11: f64,
    pub sigma_13: f64,
    pub sigma_22: f64,
    pub sigma_33: f64,
    /// `sqrt(Σ₁₁Σ₃₃ - Σ₁₃²)`.
    pub cross_root: f64,
    /// `Σ̃₁₁ Σ̃₂₂`.
    pub sigma_prod: f64,
}

/// The eight Neumann sums the covariance is assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceSums {
    /// `Σ l^{4-2s} J_l²`
    pub jj_m2: f64,
    /// `Σ l^{2-2s} J_l²`
    pub jj_m1: f64,
    /// `Σ l^{2-2s} J_l J'_l`
    pub jjp_m1: f64,
    /// `Σ l^{2-2s} J'_l²`
    pub jpjp_m1: f64,
    /// `Σ l^{2-2s} J_l J''_l`
    pub jjpp_m1: f64,
    /// `Σ l^{-2s} J'_l²`
    pub jpjp: f64,
    /// `Σ l^{-2s} J'_l J''_l`
    pub jpjpp: f64,
    /// `Σ l^{-2s} J''_l²`
    pub jppjpp: f64,
}

impl CovarianceSums {
    /// All sums from one Bessel block.
    pub fn direct(model: &RegularityModel, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        let w2 = model.shifted(2);
        let wsq = |l: usize| w2.weight_sq(l as i64);
        let mut order = truncation_order_with(r, SUM_TOL, wsq);
        while tail_sum(r, order, -2, -2, wsq) >= SUM_TOL {
            order += 1;
        }
        let block = bessel_block(r, order)?;
        let (j, jp, jpp) = (block.j(), block.jp(), block.jpp());
        let mut out = CovarianceSums {
            jj_m2: 0.0,
            jj_m1: 0.0,
            jjp_m1: 0.0,
            jpjp_m1: 0.0,
            jjpp_m1: 0.0,
            jpjp: 0.0,
            jpjpp: 0.0,
            jppjpp: 0.0,
        };
        for l in 1..=order {
            let w0 = model.weight_sq(l as i64);
            let lf = (l * l) as f64;
            let w1 = w0 * lf;
            let w2 = w1 * lf;
            out.jj_m2 += w2 * j[l] * j[l];
            out.jj_m1 += w1 * j[l] * j[l];
            out.jjp_m1 += w1 * j[l] * jp[l];
            out.jpjp_m1 += w1 * jp[l] * jp[l];
            out.jjpp_m1 += w1 * j[l] * jpp[l];
            out.jpjp += w0 * jp[l] * jp[l];
            out.jpjpp += w0 * jp[l] * jpp[l];
            out.jppjpp += w0 * jpp[l] * jpp[l];
        }
        Ok(out)
    }

    /// Leading asymptotic terms, with the oscillating factors evaluated at `phase`.
    pub fn asymptotic(s: f64, r: f64, phase: f64) -> Self {
        let lead = |kind, shift: f64| asymptotic_leading(kind, s - shift, r, phase).0;
        use DerivativeKind::*;
        CovarianceSums {
            jj_m2: lead(JJ, 2.0),
            jj_m1: lead(JJ, 1.0),
            jjp_m1: lead(JJp, 1.0),
            jpjp_m1: lead(JpJp, 1.0),
            jjpp_m1: lead(JJpp, 1.0),
            jpjp: lead(JpJp, 0.0),
            jpjpp: lead(JpJpp, 0.0),
            jppjpp: lead(JppJpp, 0.0),
        }
    }

    /// Assemble the covariance state, checking that it is a genuine covariance.
    pub fn assemble(&self, r: f64) -> Result<CovarianceState> {
        let x = self.jjp_m1;
        let y = self.jpjpp;
        let w = self.jpjp;
        let st11 = 4.0 * self.jj_m1;
        let st22 = 4.0 * w;
        check("sigma_tilde_11", st11)?;
        check("sigma_tilde_22", st22)?;
        let s11 = 4.0 * self.jj_m2 - 4.0 * x * x / w;
        let s13 = -4.0 * self.jjpp_m1 + 4.0 * x * y / w;
        let s22 = 4.0 * self.jpjp_m1 - 4.0 * x * x / self.jj_m1;
        let s33 = 4.0 * self.jppjpp - 4.0 * y * y / w;
        check("sigma_11", s11)?;
        check("sigma_22", s22)?;
        check("sigma_33", s33)?;
        let mut det = s11 * s33 - s13 * s13;
        if det < 0.0 {
            // rounding in the Schur complements; anything beyond that is a real violation
            if det < -1e-10 * s11 * s33 {
                return Err(Error::Consistency { entry: "sigma_11*sigma_33-sigma_13^2", value: det });
            }
            det = 0.0;
        }
        Ok(CovarianceState {
            r,
            sigma_tilde_11: st11,
            sigma_tilde_22: st22,
            sigma_11: s11,
            sigma_13: s13,
            sigma_22: s22,
            sigma_33: s33,
            cross_root: det.sqrt(),
            sigma_prod: st11 * st22,
        })
    }
}

fn check(entry: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Consistency { entry, value })
    }
}

/// Covariance state at radius `r`.
///
/// The asymptotic method uses the leading terms of the derivative series and is only
/// available for the default weight.
pub fn covariance_state(model: &RegularityModel, r: f64, method: Method) -> Result<CovarianceState> {
    match method {
        Method::Direct => CovarianceSums::direct(model, r)?.assemble(r),
        Method::Asymptotic => {
            if !model.is_default_weight() {
                return Err(Error::Unsupported(
                    "asymptotic covariance exists only for the weight |l|^-s".into(),
                ));
            }
            if !(r > 0.0) {
                return Err(Error::Domain(format!("radius must be positive, got {r}")));
            }
            covariance_at(model.s(), r, r)
        }
    }
}

/// Asymptotic covariance with powers of `r` taken at `r` and oscillations at `phase`.
pub fn covariance_at(s: f64, r: f64, phase: f64) -> Result<CovarianceState> {
    CovarianceSums::asymptotic(s, r, phase).assemble(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s0_gradient_variances_match_addition_formula() {
        let r = 20.0;
        let st = covariance_state(&RegularityModel::new(0.0), r, Method::Direct).unwrap();
        let b = bessel_block(r, 4).unwrap();
        let j1 = b.j()[1];
        // Σ ε_l J'_l² = 1/2 and J'_0 = -J_1
        assert!((st.sigma_tilde_22 - (1.0 - 2.0 * j1 * j1)).abs() < 1e-12);
        // Σ ε_l l² J_l² = r²/2
        assert!((st.sigma_tilde_11 - r * r).abs() < 1e-9 * r * r);
    }

    #[test]
    fn direct_matches_asymptotic_s1() {
        let model = RegularityModel::new(1.0);
        let d = covariance_state(&model, 100.0, Method::Direct).unwrap();
        let a = covariance_state(&model, 100.0, Method::Asymptotic).unwrap();
        for (x, y) in [
            (d.sigma_tilde_11, a.sigma_tilde_11),
            (d.sigma_tilde_22, a.sigma_tilde_22),
            (d.sigma_11, a.sigma_11),
            (d.sigma_22, a.sigma_22),
            (d.sigma_33, a.sigma_33),
        ] {
            assert!((x - y).abs() < 0.05 * y.abs(), "{x} vs {y}");
        }
    }

    #[test]
    fn negative_variance_is_reported() {
        let mut sums = CovarianceSums::asymptotic(0.0, 50.0, 50.0);
        sums.jpjp = -1.0;
        let err = sums.assemble(50.0).unwrap_err();
        assert!(err.is_consistency());
    }
}
