use serde::{Deserialize, Serialize};

use super::assumptions::geomspace;
use super::KernelProfile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Zero,
    Infinity,
}

/// Power-law index of φ at one end, from a least-squares fit of
/// `log φ` against `log r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatuszewskaEstimate {
    pub end: End,
    pub lower_index: f64,
    /// Smallest local slope `log2(φ(2r)/φ(r))` over the fit range.
    pub min_local_index: f64,
    pub fit_range: (f64, f64),
    /// RMS residual of the linear fit.
    pub fit_residual: f64,
    pub low_confidence: bool,
}

/// Estimates at both ends, as listed in audits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatuszewskaPair {
    pub lower_index_at_zero: MatuszewskaEstimate,
    pub lower_index_at_infinity: MatuszewskaEstimate,
}

pub const RESIDUAL_THRESHOLD: f64 = 0.05;

/// Default fit ranges: `[1e-8, 1e-4]` at zero and `[1e4, 1e8]` at infinity.
pub fn default_fit_range(end: End) -> Vec<f64> {
    match end {
        End::Zero => geomspace(1e-8, 1e-4, 16),
        End::Infinity => geomspace(1e4, 1e8, 16),
    }
}

pub fn estimate_matuszewska_lower(profile: &KernelProfile, end: End, fit_range: &[f64]) -> Result<MatuszewskaEstimate> {
    if fit_range.len() < 8 {
        return Err(Error::Precondition("fit range needs at least 8 radii".into()));
    }
    if fit_range.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidArgument("fit radii must be positive".into()));
    }
    let xs: Vec<f64> = fit_range.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = fit_range.iter().map(|&r| profile.eval_unchecked(r).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit radii must not all coincide".into()));
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    let fit_residual = (rss / n).sqrt();
    let min_local_index = fit_range
        .iter()
        .map(|&r| (profile.eval_unchecked(2.0 * r) / profile.eval_unchecked(r)).log2())
        .fold(f64::INFINITY, f64::min);
    let lo = fit_range.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = fit_range.iter().cloned().fold(0.0, f64::max);
    Ok(MatuszewskaEstimate {
        end,
        lower_index: slope,
        min_local_index,
        fit_range: (lo, hi),
        fit_residual,
        low_confidence: !slope.is_finite() || fit_residual > RESIDUAL_THRESHOLD,
    })
}

pub fn estimate_both(profile: &KernelProfile) -> Result<MatuszewskaPair> {
    Ok(MatuszewskaPair {
        lower_index_at_zero: estimate_matuszewska_lower(profile, End::Zero, &default_fit_range(End::Zero))?,
        lower_index_at_infinity: estimate_matuszewska_lower(profile, End::Infinity, &default_fit_range(End::Infinity))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_slope() {
        let e =
            estimate_matuszewska_lower(&KernelProfile::power(0.7), End::Zero, &default_fit_range(End::Zero)).unwrap();
        assert!((e.lower_index - 0.7).abs() < 1e-10);
        assert!(e.fit_residual < 1e-12);
        assert!(!e.low_confidence);
    }

    #[test]
    fn short_range_is_rejected() {
        let r = geomspace(1.0, 2.0, 5);
        assert!(estimate_matuszewska_lower(&KernelProfile::ConstantOne, End::Zero, &r).is_err());
    }
}
