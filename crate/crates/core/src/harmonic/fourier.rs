use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::series::{FourierIndex, FourierSeries, FourierTerm};
use crate::error::{invalid, Result};
use crate::quad::GaussLegendre;
use crate::seminorm::TestFunction;

/// Coefficients below this fraction of the largest one are dropped.
const DROP_REL: f64 = 1e-13;

fn sparse(coeffs: Vec<(i64, Complex64)>) -> FourierSeries {
    let top = coeffs.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    FourierSeries::from_terms(
        coeffs
            .into_iter()
            .filter(|(_, c)| c.norm() > DROP_REL * top)
            .map(|(m, c)| FourierTerm { index: FourierIndex::Int(m), coeff: c }),
    )
}

/// `f̂(m) = ∫₀¹ f(x) e^{-2πimx} dx` for `|m| ≤ max_index`, by Gauss panels
/// of order 16, at least four per period of the highest mode.
pub fn fourier_coefficients(f: impl Fn(f64) -> f64, max_index: usize) -> Result<FourierSeries> {
    if max_index < 1 {
        return Err(invalid("the maximal index must be at least 1"));
    }
    let rule = GaussLegendre::cached(16);
    let panels = (4 * max_index).max(32);
    let h = 1.0 / panels as f64;
    let mut nodes = Vec::with_capacity(panels * rule.order());
    for k in 0..panels {
        rule.map(k as f64 * h, (k + 1) as f64 * h, |x, w| nodes.push((x, w * f(x))));
    }
    let m = max_index as i64;
    let coeffs = (-m..=m)
        .into_par_iter()
        .map(|j| {
            let c: Complex64 = nodes
                .iter()
                .map(|&(x, fw)| {
                    fw * Complex64::from_polar(1.0, -(j as f64 * x).rem_euclid(1.0) * std::f64::consts::TAU)
                })
                .sum();
            (j, c)
        })
        .collect();
    Ok(sparse(coeffs))
}

/// Coefficients from `N` equispaced samples `f(k/N)`, by the trapezoid rule
/// (a discrete Fourier transform). Needs `max_index < N/2`.
pub fn fourier_coefficients_from_samples(samples: &[f64], max_index: usize) -> Result<FourierSeries> {
    let n = samples.len();
    if max_index < 1 || 2 * max_index >= n {
        return Err(invalid(format!("need 1 <= max_index < N/2 for {n} samples, got {max_index}")));
    }
    let m = max_index as i64;
    let coeffs = (-m..=m)
        .into_par_iter()
        .map(|j| {
            let c: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let t = ((j * k as i64).rem_euclid(n as i64)) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, -t * std::f64::consts::TAU)
                })
                .sum();
            (j, c / n as f64)
        })
        .collect();
    Ok(sparse(coeffs))
}

/// Coefficients of a test function on `(0, 1)` in its first coordinate:
/// exact for sparse series (of the real part), by quadrature otherwise.
pub fn fourier_coefficients_of(f: &TestFunction, max_index: usize) -> Result<FourierSeries> {
    f.validate()?;
    if let TestFunction::SparseFourier { series } = f {
        let bound = (max_index as f64).ln();
        let mut out = FourierSeries::new();
        for t in series.terms() {
            // Re f has coefficients (f̂(m) + conj f̂(-m)) / 2
            out.add(t.index, t.coeff * 0.5);
            out.add(t.index.negated(), t.coeff.conj() * 0.5);
        }
        let kept = out.terms().iter().copied().filter(|t| t.index.is_zero() || t.index.ln_abs() <= bound + 1e-12);
        return Ok(FourierSeries::from_terms(kept));
    }
    fourier_coefficients(|x| f.eval(&[x]), max_index)
}

/// `I₀(m) = ∫₀¹ (1 - cos 2πmh)/h dh` and
/// `I_log(m) = ∫₀¹ (1 - cos 2πmh)(-ln h ∨ 1)/h dh`.
///
/// The first period `[0, 1/|m|]` is graded toward 0 for the logarithm, the
/// rest is split into whole periods and at `1/e`.
pub fn cosine_log_integrals(m: i64) -> (f64, f64) {
    if m == 0 {
        return (0.0, 0.0);
    }
    let k = m.unsigned_abs() as f64;
    let rule = GaussLegendre::cached(20);
    let inv_e = (-1.0f64).exp();
    // (1 - cos 2πkh)/h without cancellation
    let base = |h: f64| {
        let s = (std::f64::consts::PI * k * (h * k).fract() / k).sin();
        2.0 * s * s / h
    };
    let weight = |h: f64| (-h.ln()).max(1.0);
    let mut cuts: Vec<f64> = (0..=m.unsigned_abs()).map(|j| j as f64 / k).collect();
    if let Err(at) = cuts.binary_search_by(|c| c.total_cmp(&inv_e)) {
        cuts.insert(at, inv_e);
    }
    let (mut i0, mut il) = (0.0, 0.0);
    for (j, w) in cuts.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if j == 0 {
            i0 += rule.integrate(a, b, base);
            for layer in 0..60 {
                let (lo, hi) = (b * 0.5f64.powi(layer + 1), b * 0.5f64.powi(layer));
                il += rule.integrate(lo, hi, |h| base(h) * weight(h));
            }
        } else {
            i0 += rule.integrate(a, b, base);
            il += rule.integrate(a, b, |h| base(h) * weight(h));
        }
    }
    (i0, il)
}

/// Weight `w(|m|)` of the characterizing sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FourierWeight {
    Log,
    LogSquared,
}

impl FourierWeight {
    fn of_ln(&self, ln_m: f64) -> f64 {
        match self {
            FourierWeight::Log => ln_m,
            FourierWeight::LogSquared => ln_m * ln_m,
        }
    }
}

fn check_cutoffs(cutoffs: &[FourierIndex]) -> Result<Vec<f64>> {
    let ln: Vec<f64> = cutoffs.iter().map(|c| c.ln_abs()).collect();
    if ln.iter().any(|v| !(*v >= 0.0)) {
        return Err(invalid("cutoffs must be nonzero indices"));
    }
    if ln.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("cutoffs must be strictly increasing in |m|"));
    }
    Ok(ln)
}

/// Partial sums `Σ_{0<|m|≤M} |f̂(m)|² w(|m|)` at each cutoff `M`, with
/// compensated summation in order of increasing `|m|`.
pub fn weighted_sum(series: &FourierSeries, weight: FourierWeight, cutoffs: &[FourierIndex]) -> Result<Vec<f64>> {
    let ln_cut = check_cutoffs(cutoffs)?;
    let mut terms: Vec<(f64, f64)> =
        series.terms().iter().filter(|t| !t.index.is_zero()).map(|t| (t.index.ln_abs(), t.coeff.norm_sqr())).collect();
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::with_capacity(ln_cut.len());
    let (mut s, mut comp) = (0.0f64, 0.0f64);
    let mut next = 0;
    for c in ln_cut {
        while next < terms.len() && terms[next].0 <= c + 1e-12 * c.max(1.0) {
            let (ln_m, a2) = terms[next];
            let x = a2 * weight.of_ln(ln_m);
            let t = s + x;
            comp += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
            s = t;
            next += 1;
        }
        out.push(s + comp);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumVerdict {
    /// The last increment is below the tolerance.
    Converging,
    Diverging,
    /// Fewer than two cutoffs.
    Undetermined,
}

/// Partial sums for both weights on one cutoff ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSumReport {
    pub cutoffs: Vec<String>,
    pub ln_cutoffs: Vec<f64>,
    pub sum_log: Vec<f64>,
    pub sum_log2: Vec<f64>,
    /// Increment tolerance between the last two cutoffs.
    pub tolerance: f64,
    pub log_verdict: SumVerdict,
    pub log2_verdict: SumVerdict,
}

fn verdict(sums: &[f64], tol: f64) -> SumVerdict {
    match sums {
        [.., a, b] if b - a < tol => SumVerdict::Converging,
        [.., _, _] => SumVerdict::Diverging,
        _ => SumVerdict::Undetermined,
    }
}

impl WeightedSumReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("cutoff,sum_log,sum_log2\n");
        for k in 0..self.cutoffs.len() {
            let _ = writeln!(s, "{},{:.17e},{:.17e}", self.cutoffs[k], self.sum_log[k], self.sum_log2[k]);
        }
        s
    }
}

pub fn weighted_sum_report(
    series: &FourierSeries,
    cutoffs: &[FourierIndex],
    tolerance: f64,
) -> Result<WeightedSumReport> {
    if !(tolerance > 0.0) {
        return Err(invalid("the increment tolerance must be positive"));
    }
    let sum_log = weighted_sum(series, FourierWeight::Log, cutoffs)?;
    let sum_log2 = weighted_sum(series, FourierWeight::LogSquared, cutoffs)?;
    Ok(WeightedSumReport {
        cutoffs: cutoffs.iter().map(|c| c.to_string()).collect(),
        ln_cutoffs: cutoffs.iter().map(|c| c.ln_abs()).collect(),
        log_verdict: verdict(&sum_log, tolerance),
        log2_verdict: verdict(&sum_log2, tolerance),
        sum_log,
        sum_log2,
        tolerance,
    })
}

/// `f̂((2n+1) 2^l) = l^{-3/2}` for `l = 1..=levels`, zero elsewhere.
pub fn step3_counterexample(n: u32, levels: u32) -> Result<FourierSeries> {
    if n < 2 || levels < 1 {
        return Err(invalid(format!("need n >= 2 and at least one level, got n={n}, levels={levels}")));
    }
    let base = 2 * n as i64 + 1;
    Ok(FourierSeries::from_terms((1..=levels).map(|l| FourierTerm {
        index: FourierIndex::scaled(base, l),
        coeff: Complex64::new((l as f64).powf(-1.5), 0.0),
    })))
}

/// The index of the level-`l` term, `(2n+1) 2^l`.
pub fn step3_index(n: u32, level: u32) -> FourierIndex {
    FourierIndex::scaled(2 * n as i64 + 1, level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_integral_closed_form() {
        // γ + ln 2π - Ci(2π)
        let (i0, _) = cosine_log_integrals(1);
        assert!((i0 - 2.43765339305722).abs() < 1e-12, "{i0}");
        assert_eq!(cosine_log_integrals(0), (0.0, 0.0));
        assert_eq!(cosine_log_integrals(-7), cosine_log_integrals(7));
    }

    #[test]
    fn step3_terms() {
        let s = step3_counterexample(2, 4).unwrap();
        assert_eq!(s.coeff(FourierIndex::Int(10)).re, 1.0);
        assert_eq!(s.coeff(FourierIndex::Int(80)).re, 0.125);
        assert_eq!(s.coeff(FourierIndex::Int(15)).norm(), 0.0);
    }
}
