use serde::{Deserialize, Serialize};

use super::KernelProfile;
use crate::error::{invalid, Error, Result};

/// The exponents `(p, q)` of the mixed seminorm together with the derived
/// series exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
}

impl ExponentPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(q > 1.0 && q <= p && p.is_finite()) {
            return Err(invalid(format!("exponents must satisfy 1 < q <= p < inf, got p={p}, q={q}")));
        }
        Ok(Self { p, q })
    }

    /// p = q = 2.
    pub fn hilbert() -> Self {
        Self { p: 2.0, q: 2.0 }
    }

    /// `t1 = min(q, p - p/q)`
    pub fn t1(&self) -> f64 {
        self.q.min(self.p - self.p / self.q)
    }

    /// `t2 = 1/(q-1)`
    pub fn t2(&self) -> f64 {
        1.0 / (self.q - 1.0)
    }

    /// Conjugate exponent `p/(p-1)`.
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }
}

/// Either the product form `|x-y|^{-d} φ^{-q}` or the constant kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelForm {
    Profile(KernelProfile),
    /// K ≡ 1, used by the integrable-kernel example on the unit interval.
    Flat,
}

/// Radial jump kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub d: usize,
    pub q: f64,
    pub form: KernelForm,
}

impl Kernel {
    pub fn new(d: usize, q: f64, profile: KernelProfile) -> Result<Self> {
        if d == 0 {
            return Err(invalid("kernel dimension must be at least 1"));
        }
        if !(q > 1.0 && q.is_finite()) {
            return Err(invalid(format!("inner exponent must exceed 1, got {q}")));
        }
        profile.validate()?;
        Ok(Self { d, q, form: KernelForm::Profile(profile) })
    }

    /// The constant kernel K ≡ 1 in dimension d.
    pub fn flat(d: usize, q: f64) -> Self {
        Self { d, q, form: KernelForm::Flat }
    }

    /// `|x-y|^{-d-α}` for p = q = 2.
    pub fn stable(d: usize, alpha: f64) -> Result<Self> {
        Self::new(d, 2.0, KernelProfile::stable(alpha))
    }

    pub fn profile(&self) -> Option<&KernelProfile> {
        match &self.form {
            KernelForm::Profile(p) => Some(p),
            KernelForm::Flat => None,
        }
    }

    /// Radial part `K(r)` for `r > 0`.
    #[inline]
    pub fn radial(&self, r: f64) -> f64 {
        match &self.form {
            KernelForm::Flat => 1.0,
            KernelForm::Profile(KernelProfile::ConstantOne) => r.powi(-(self.d as i32)),
            KernelForm::Profile(KernelProfile::Power { exponent, scale }) => {
                scale.powf(-self.q) * r.powf(-(self.d as f64) - self.q * exponent)
            }
            KernelForm::Profile(p) => r.powi(-(self.d as i32)) * p.eval_unchecked(r).powf(-self.q),
        }
    }

    /// `K(x, y)`; errors when the points coincide or have the wrong dimension.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.d || y.len() != self.d {
            return Err(invalid(format!("points must have dimension {}", self.d)));
        }
        let r = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(Error::Singularity("kernel evaluated on the diagonal x = y".into()));
        }
        Ok(self.radial(r))
    }

    /// `∫_{w0}^{w1} K(√w) dw` in closed form where available.
    pub(crate) fn sqrt_antiderivative(&self, w0: f64, w1: f64) -> Option<f64> {
        // K(√w) = c w^{-β}
        let (c, beta) = match &self.form {
            KernelForm::Flat => (1.0, 0.0),
            KernelForm::Profile(KernelProfile::ConstantOne) => (1.0, self.d as f64 / 2.0),
            KernelForm::Profile(KernelProfile::Power { exponent, scale }) => {
                (scale.powf(-self.q), (self.d as f64 + self.q * exponent) / 2.0)
            }
            _ => return None,
        };
        let e = 1.0 - beta;
        Some(if e.abs() < 1e-12 { c * (w1 / w0).ln() } else { c * (w1.powf(e) - w0.powf(e)) / e })
    }
}
