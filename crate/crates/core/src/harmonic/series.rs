use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Frequency index. Indices of the form `base·2^shift` are kept symbolic so
/// that series reaching far beyond `i64` can still be weighted exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FourierIndex {
    Int(i64),
    Scaled { base: i64, shift: u32 },
}

impl FourierIndex {
    /// Collapses to `Int` when the value fits.
    pub fn scaled(base: i64, shift: u32) -> Self {
        if shift < 63 {
            if let Some(v) = base.checked_mul(1i64 << shift) {
                return FourierIndex::Int(v);
            }
        }
        FourierIndex::Scaled { base, shift }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FourierIndex::Int(m) => *m == 0,
            FourierIndex::Scaled { base, .. } => *base == 0,
        }
    }

    /// `ln |m|`; `-inf` for m = 0.
    pub fn ln_abs(&self) -> f64 {
        match self {
            FourierIndex::Int(m) => (m.unsigned_abs() as f64).ln(),
            FourierIndex::Scaled { base, shift } => {
                (base.unsigned_abs() as f64).ln() + *shift as f64 * std::f64::consts::LN_2
            }
        }
    }

    pub fn negated(&self) -> Self {
        match *self {
            FourierIndex::Int(m) => FourierIndex::Int(-m),
            FourierIndex::Scaled { base, shift } => FourierIndex::Scaled { base: -base, shift },
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            FourierIndex::Int(m) => Some(*m),
            FourierIndex::Scaled { .. } => None,
        }
    }
}

impl fmt::Display for FourierIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FourierIndex::Int(m) => write!(f, "{m}"),
            FourierIndex::Scaled { base, shift } => write!(f, "{base}*2^{shift}"),
        }
    }
}

impl std::str::FromStr for FourierIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(format!("bad Fourier index `{s}`"));
        match s.split_once("*2^") {
            None => s.trim().parse().map(FourierIndex::Int).map_err(|_| bad()),
            Some((b, k)) => {
                let base = b.trim().parse().map_err(|_| bad())?;
                let shift = k.trim().parse().map_err(|_| bad())?;
                Ok(FourierIndex::scaled(base, shift))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierTerm {
    pub index: FourierIndex,
    pub coeff: Complex64,
}

/// Sparse 1-periodic Fourier series `Σ f̂(m) e^{2πimx}`.
///
/// Serialized as a JSON map from index strings (`"12"`, `"5*2^100"`) to
/// `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "BTreeMap<String, [f64; 2]>", try_from = "BTreeMap<String, [f64; 2]>")]
pub struct FourierSeries {
    terms: Vec<FourierTerm>,
}

impl FourierSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c` to the coefficient at `index`.
    pub fn add(&mut self, index: FourierIndex, c: Complex64) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.index == index) {
            t.coeff += c;
        } else {
            self.terms.push(FourierTerm { index, coeff: c });
        }
    }

    /// Builds a series, merging repeated indices.
    pub fn from_terms(terms: impl IntoIterator<Item = FourierTerm>) -> Self {
        let mut at: std::collections::HashMap<FourierIndex, usize> = std::collections::HashMap::new();
        let mut out: Vec<FourierTerm> = Vec::new();
        for t in terms {
            match at.entry(t.index) {
                std::collections::hash_map::Entry::Occupied(e) => out[*e.get()].coeff += t.coeff,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(out.len());
                    out.push(t);
                }
            }
        }
        Self { terms: out }
    }

    pub fn with(mut self, m: i64, c: Complex64) -> Self {
        self.add(FourierIndex::Int(m), c);
        self
    }

    pub fn terms(&self) -> &[FourierTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: FourierIndex) -> Complex64 {
        self.terms.iter().filter(|t| t.index == index).map(|t| t.coeff).sum()
    }

    /// Largest `|m|` as `ln |m|`.
    pub fn max_ln_index(&self) -> f64 {
        self.terms.iter().map(|t| t.index.ln_abs()).fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when `f̂(-m) = conj f̂(m)` for every stored term.
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| (self.coeff(t.index.negated()) - t.coeff.conj()).norm() <= tol)
    }

    /// Complex value at `x`; needs every index to fit in `i64`.
    pub fn eval_complex(&self, x: f64) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let m = t.index.as_i64().ok_or_else(|| {
                Error::Unsupported(format!("pointwise evaluation of the symbolic frequency {}", t.index))
            })?;
            // reduce m·x modulo 1 before scaling by 2π
            let phase = (m as f64 * x).rem_euclid(1.0) * std::f64::consts::TAU;
            s += t.coeff * Complex64::from_polar(1.0, phase);
        }
        Ok(s)
    }

    /// Real part of the series at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.eval_complex(x).map(|z| z.re)
    }
}

impl From<FourierSeries> for BTreeMap<String, [f64; 2]> {
    fn from(s: FourierSeries) -> Self {
        s.terms.iter().map(|t| (t.index.to_string(), [t.coeff.re, t.coeff.im])).collect()
    }
}

impl TryFrom<BTreeMap<String, [f64; 2]>> for FourierSeries {
    type Error = Error;

    fn try_from(map: BTreeMap<String, [f64; 2]>) -> Result<Self> {
        let mut s = FourierSeries::new();
        for (k, [re, im]) in map {
            s.add(k.parse()?, Complex64::new(re, im));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_indices_collapse_when_small() {
        assert_eq!(FourierIndex::scaled(5, 3), FourierIndex::Int(40));
        assert!(matches!(FourierIndex::scaled(5, 80), FourierIndex::Scaled { .. }));
        let big = FourierIndex::scaled(5, 80);
        assert!((big.ln_abs() - (5f64.ln() + 80.0 * 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let mut s = FourierSeries::new().with(2, Complex64::new(1.0, -0.5));
        s.add(FourierIndex::scaled(5, 100), Complex64::new(0.25, 0.0));
        let js = serde_json::to_string(&s).unwrap();
        let back: FourierSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back.coeff(FourierIndex::Int(2)), Complex64::new(1.0, -0.5));
        assert_eq!(back.coeff(FourierIndex::scaled(5, 100)), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn evaluates_a_single_mode() {
        let s = FourierSeries::new().with(1, Complex64::new(1.0, 0.0));
        assert!((s.eval(0.25).unwrap()).abs() < 1e-15);
        assert!((s.eval(0.5).unwrap() + 1.0).abs() < 1e-15);
    }
}
