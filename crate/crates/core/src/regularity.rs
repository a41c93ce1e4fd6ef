//! The spectral model: regularity parameter `s` and mode weights `σ_l`.

use std::fmt;
use std::sync::Arc;

/// Weight hook for non-standard symbol sequences. Called with `l >= 1` only; the
/// model enforces `σ_{-l} = σ_l` and `σ_0 = 0`.
pub type WeightFn = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Weight {
    Power,
    Custom(WeightFn),
}

/// Regularity parameter `s` with the weight sequence `σ_l`.
///
/// The default weight is `σ_l = |l|^{-s}` for `l ≠ 0` and `σ_0 = 0`.
#[derive(Clone)]
pub struct RegularityModel {
    s: f64,
    weight: Weight,
}

impl fmt::Debug for RegularityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.weight {
            Weight::Power => "power",
            Weight::Custom(_) => "custom",
        };
        f.debug_struct("RegularityModel").field("s", &self.s).field("weight", &kind).finish()
    }
}

impl RegularityModel {
    pub fn new(s: f64) -> Self {
        Self { s, weight: Weight::Power }
    }

    /// A model whose weights come from `weight(l)` for `l >= 1`. `s` is kept as the
    /// nominal regularity (used for truncation estimates and asymptotic regimes).
    pub fn with_weight(s: f64, weight: WeightFn) -> Self {
        Self { s, weight: Weight::Custom(weight) }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn is_default_weight(&self) -> bool {
        matches!(self.weight, Weight::Power)
    }

    /// `σ_l`, symmetric in `l` and zero at `l = 0`.
    pub fn weight(&self, l: i64) -> f64 {
        if l == 0 {
            return 0.0;
        }
        let n = l.unsigned_abs();
        match &self.weight {
            Weight::Power => (n as f64).powf(-self.s),
            Weight::Custom(w) => w(n),
        }
    }

    /// `σ_l²`, computed without the intermediate power for the default weight.
    pub fn weight_sq(&self, l: i64) -> f64 {
        if l == 0 {
            return 0.0;
        }
        match &self.weight {
            Weight::Power => (l.unsigned_abs() as f64).powf(-2.0 * self.s),
            Weight::Custom(w) => {
                let v = w(l.unsigned_abs());
                v * v
            }
        }
    }

    /// The model with squared weights multiplied by `l^{2k}`; for the default
    /// weight this is the model at `s - k`.
    pub fn shifted(&self, k: i32) -> Self {
        match &self.weight {
            Weight::Power => Self::new(self.s - k as f64),
            Weight::Custom(w) => {
                let w = Arc::clone(w);
                Self {
                    s: self.s - k as f64,
                    weight: Weight::Custom(Arc::new(move |l| w(l) * (l as f64).powi(k))),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_weight_properties() {
        let m = RegularityModel::new(1.3);
        assert_eq!(m.weight(0), 0.0);
        for l in 1..50i64 {
            assert_eq!(m.weight(l), m.weight(-l));
            assert!((m.weight(l) * (l as f64).powf(1.3) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn shifted_custom_weight() {
        let m = RegularityModel::with_weight(1.0, Arc::new(|l| 1.0 / (l as f64 + 1.0)));
        let sh = m.shifted(1);
        assert_eq!(sh.s(), 0.0);
        assert!((sh.weight(3) - 3.0 / 4.0).abs() < 1e-15);
        assert_eq!(sh.weight(0), 0.0);
    }
}
