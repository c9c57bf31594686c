use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Radial profile φ of a jump kernel `K(x,y) = |x-y|^{-d} φ(|x-y|)^{-q}`.
///
/// Serialized as `{"variant": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum KernelProfile {
    /// φ(r) = c·r^s
    Power { exponent: f64, scale: f64 },
    /// φ(r) = log(1+r)^γ
    Log1pPower { gamma: f64 },
    /// φ ≡ 1
    ConstantOne,
    /// φ(r) = (|log r| ∨ 1)^{-β}
    InvLogPower { beta: f64 },
    /// Piecewise linear in log-log coordinates, continued by the edge slopes.
    Tabulated { knots: Vec<f64>, values: Vec<f64> },
}

impl KernelProfile {
    pub fn power(exponent: f64) -> Self {
        KernelProfile::Power { exponent, scale: 1.0 }
    }

    /// The stable profile `r^{α/2}`, giving `|x-y|^{-d-α}` when q = 2.
    pub fn stable(alpha: f64) -> Self {
        Self::power(alpha / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelProfile::Power { exponent, scale } => {
                if !(*exponent > 0.0 && exponent.is_finite()) {
                    return Err(invalid(format!("power exponent must be positive, got {exponent}")));
                }
                if !(*scale > 0.0 && scale.is_finite()) {
                    return Err(invalid(format!("power scale must be positive, got {scale}")));
                }
            }
            KernelProfile::Log1pPower { gamma } => {
                if !(*gamma > 0.0 && *gamma < 1.0) {
                    return Err(invalid(format!("log1p exponent must lie in (0,1), got {gamma}")));
                }
            }
            KernelProfile::ConstantOne => {}
            KernelProfile::InvLogPower { beta } => {
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(invalid(format!("inverse-log exponent must be positive, got {beta}")));
                }
            }
            KernelProfile::Tabulated { knots, values } => {
                if knots.is_empty() || knots.len() != values.len() {
                    return Err(invalid("tabulated profile needs matching nonempty knots and values"));
                }
                if knots.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
                    return Err(invalid("tabulated knots must be positive"));
                }
                if knots.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid("tabulated knots must be strictly increasing"));
                }
                if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                    return Err(invalid("tabulated values must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Evaluates φ(r). Errors on nonpositive or non-finite radii.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || r.is_nan() {
            return Err(Error::InvalidArgument(format!("profile radius must be positive, got {r}")));
        }
        Ok(self.eval_unchecked(r))
    }

    /// Evaluates φ(r) for r > 0 without argument checks.
    #[inline]
    pub fn eval_unchecked(&self, r: f64) -> f64 {
        match self {
            KernelProfile::Power { exponent, scale } => scale * r.powf(*exponent),
            KernelProfile::Log1pPower { gamma } => r.ln_1p().powf(*gamma),
            KernelProfile::ConstantOne => 1.0,
            KernelProfile::InvLogPower { beta } => r.ln().abs().max(1.0).powf(-beta),
            KernelProfile::Tabulated { knots, values } => tabulated(knots, values, r),
        }
    }

    /// Whether the variant is required to be nondecreasing.
    pub fn claims_monotone(&self) -> bool {
        !matches!(self, KernelProfile::InvLogPower { .. })
    }

    /// True when the tabulated values are nondecreasing (always true for
    /// the analytic monotone variants).
    pub fn is_monotone(&self) -> bool {
        match self {
            KernelProfile::Tabulated { values, .. } => values.windows(2).all(|w| w[0] <= w[1]),
            KernelProfile::InvLogPower { .. } => false,
            _ => true,
        }
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match self {
            KernelProfile::Power { exponent, scale } if *scale == 1.0 => format!("r^{exponent}"),
            KernelProfile::Power { exponent, scale } => format!("{scale}*r^{exponent}"),
            KernelProfile::Log1pPower { gamma } => format!("log(1+r)^{gamma}"),
            KernelProfile::ConstantOne => "1".to_string(),
            KernelProfile::InvLogPower { beta } => format!("(|log r|v1)^-{beta}"),
            KernelProfile::Tabulated { knots, .. } => format!("tabulated[{}]", knots.len()),
        }
    }
}

fn tabulated(knots: &[f64], values: &[f64], r: f64) -> f64 {
    let n = knots.len();
    if n == 1 {
        return values[0];
    }
    let lr = r.ln();
    // segment index: clamp to the edge segments so they extend the table
    let i = match knots.binary_search_by(|k| k.partial_cmp(&r).unwrap()) {
        Ok(i) => return values[i],
        Err(0) => 0,
        Err(i) if i >= n => n - 2,
        Err(i) => i - 1,
    };
    let (x0, x1) = (knots[i].ln(), knots[i + 1].ln());
    let (y0, y1) = (values[i].ln(), values[i + 1].ln());
    let t = (lr - x0) / (x1 - x0);
    (y0 + t * (y1 - y0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(KernelProfile::power(0.5).eval(4.0).unwrap(), 2.0);
        assert_eq!(KernelProfile::ConstantOne.eval(1e-3).unwrap(), 1.0);
        let e1 = std::f64::consts::E - 1.0;
        let v = KernelProfile::Log1pPower { gamma: 0.5 }.eval(e1).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_radius_is_rejected() {
        assert!(KernelProfile::ConstantOne.eval(0.0).is_err());
        assert!(KernelProfile::power(1.0).eval(-1.0).is_err());
    }

    #[test]
    fn tabulated_interpolates_in_log_log() {
        // r^{1/2} sampled at 1 and 100 reproduces r^{1/2} everywhere
        let p = KernelProfile::Tabulated { knots: vec![1.0, 100.0], values: vec![1.0, 10.0] };
        for r in [0.01, 1.0, 4.0, 50.0, 1e4] {
            assert!((p.eval(r).unwrap() - r.sqrt()).abs() < 1e-12 * r.sqrt().max(1.0));
        }
    }

    #[test]
    fn json_round_trip() {
        let p = KernelProfile::Power { exponent: 0.25, scale: 2.0 };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"variant":"power","params":{"exponent":0.25,"scale":2.0}}"#);
        let back: KernelProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let c: KernelProfile = serde_json::from_str(r#"{"variant":"constant_one"}"#).unwrap();
        assert_eq!(c, KernelProfile::ConstantOne);
    }
}
