//! Closed forms for the one-dimensional examples and the strip kernel.

use serde::{Deserialize, Serialize};

use super::slab::cross_section_kernel;
use crate::error::{invalid, Error, Result};
use crate::kernels::Kernel;
use crate::quad::scaled_panels;

/// `∫₀¹∫₀¹ (x^{-γ} - y^{-γ})² dx dy = 2(1/(1-2γ) - 1/(1-γ)²)`, the squared
/// full seminorm of `x^{-γ}` for the constant kernel.
pub fn exact_const_kernel_full(gamma: f64) -> Result<f64> {
    if gamma >= 0.5 {
        return Err(Error::Pole(format!("the constant-kernel seminorm of x^-γ is infinite for γ >= 1/2, got {gamma}")));
    }
    if !(gamma > 0.0) {
        return Err(invalid(format!("γ must be positive, got {gamma}")));
    }
    Ok(2.0 * (1.0 / (1.0 - 2.0 * gamma) - 1.0 / ((1.0 - gamma) * (1.0 - gamma))))
}

/// Upper bound for the squared truncated seminorm of `x^{-γ}` with the
/// constant kernel and `θ = ε`.
pub fn const_kernel_truncated_bound(gamma: f64, eps: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(invalid(format!("γ must lie in (0, 1/2), got {gamma}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("ε must lie in (0, 1], got {eps}")));
    }
    let (a, b) = (1.0 - gamma, 1.0 - 2.0 * gamma);
    Ok(eps / a - ((1.0 + eps).powf(a) - (1.0 - eps).powf(a)) / (a * a)
        + ((1.0 + eps).powf(b) - (1.0 - eps).powf(b)) / (b * (2.0 - 2.0 * gamma)))
}

/// `n ln n - 2n + ln n + 2`: the part `1/n < y < x < 1` of the squared
/// seminorm of `n ∧ 1/x` for `K = |x - y|^{-1}`.
pub fn exact_hilbert_subintegral(n: f64) -> Result<f64> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(invalid(format!("n must be a finite number >= 1, got {n}")));
    }
    let ln = n.ln();
    Ok(n * ln - 2.0 * n + ln + 2.0)
}

/// Independent quadrature of the same region: `∫∫_{1/n<y<x<1} (x-y)/(x²y²)`.
pub fn hilbert_subintegral_quadrature(n: f64, order: usize) -> Result<f64> {
    exact_hilbert_subintegral(n)?;
    let a = 1.0 / n;
    if a >= 1.0 {
        return Ok(0.0);
    }
    Ok(scaled_panels(a, 1.0, a, order, |x| {
        if x <= a {
            return 0.0;
        }
        scaled_panels(a, x, a, order, |y| (x - y) / (x * x * y * y))
    }))
}

/// `κ(x₁, y₁)` on `R × (0,1)` for `|x - y|^{-2-α}` and its ratio to the
/// reference profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveKernel {
    pub kappa: f64,
    /// `|t|^{-2-α}` for `|t| ≥ 1`, `|t|^{-1-α}` below.
    pub reference: f64,
    pub ratio: f64,
}

pub fn strip_effective_kernel(x1: f64, y1: f64, alpha: f64) -> Result<EffectiveKernel> {
    if x1 == y1 {
        return Err(Error::Singularity("coincident abscissae".into()));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(invalid(format!("α must lie in (0, 2), got {alpha}")));
    }
    let t = (x1 - y1).abs();
    let kappa = cross_section_kernel(&Kernel::stable(2, alpha)?, 1, t, 16)?;
    let reference = if t >= 1.0 { t.powf(-2.0 - alpha) } else { t.powf(-1.0 - alpha) };
    Ok(EffectiveKernel { kappa, reference, ratio: kappa / reference })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((exact_const_kernel_full(0.25).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!(matches!(exact_const_kernel_full(0.5), Err(Error::Pole(_))));
        assert_eq!(exact_hilbert_subintegral(1.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((exact_hilbert_subintegral(e).unwrap() - (3.0 - e)).abs() < 1e-14);
    }

    #[test]
    fn subintegral_quadrature_matches() {
        for n in [2.0, 10.0, 100.0] {
            let q = hilbert_subintegral_quadrature(n, 12).unwrap();
            let x = exact_hilbert_subintegral(n).unwrap();
            assert!((q / x - 1.0).abs() < 1e-10, "n={n}: {q} vs {x}");
        }
    }
}
