//! Empirical constants of the Whitney cube-sum inequalities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::admissible_chain;
use super::shadow::{random_shadow_pair, shadow};
use super::whitney::{long_distance, WhitneyDecomposition};
use crate::error::{Error, Result};
use crate::kernels::{ExponentPair, KernelProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub cube: usize,
    /// Partner cube for pair-based sums (chain sums), otherwise equal to `cube`.
    pub partner: usize,
    pub sum: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    /// Sup of the ratio column.
    pub constant: f64,
    pub argmax: usize,
    pub rows: Vec<LemmaRow>,
    pub exponent: f64,
    pub rho: f64,
    pub cubes: usize,
    pub max_depth: i32,
}

impl LemmaReport {
    fn from_rows(lemma: &str, rows: Vec<LemmaRow>, exponent: f64, w: &WhitneyDecomposition) -> Self {
        let (argmax, constant) =
            rows.iter().enumerate().fold((0, 0.0f64), |acc, (i, r)| if r.ratio > acc.1 { (i, r.ratio) } else { acc });
        Self {
            lemma: lemma.to_string(),
            constant,
            argmax: rows.get(argmax).map(|r| r.cube).unwrap_or(0),
            rows,
            exponent,
            rho: w.rho,
            cubes: w.len(),
            max_depth: w.max_depth,
        }
    }

    /// CSV with columns `cube,sum,ratio`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("cube,sum,ratio\n");
        for r in &self.rows {
            s.push_str(&format!("{},{:e},{:e}\n", r.cube, r.sum, r.ratio));
        }
        s
    }
}

fn check_eta(eta: f64, exps: &ExponentPair) -> Result<()> {
    if eta < exps.t1() - 1e-12 {
        return Err(Error::Precondition(format!("eta = {eta} is below min(q, p - p/q) = {}", exps.t1())));
    }
    Ok(())
}

/// `sup_Q φ(l(Q))^η Σ_S l(S)^d / (D(Q,S)^d φ(D(Q,S))^η)`.
pub fn lemma_sum_all_over(
    w: &WhitneyDecomposition,
    phi: &KernelProfile,
    eta: f64,
    exps: &ExponentPair,
) -> Result<LemmaReport> {
    check_eta(eta, exps)?;
    let d = w.dim() as i32;
    // φ(r)^η with one power for the power profile
    let phi_eta = |r: f64| match phi {
        KernelProfile::Power { exponent, scale } => scale.powf(eta) * r.powf(exponent * eta),
        _ => phi.eval_unchecked(r).powf(eta),
    };
    let rows: Vec<LemmaRow> = (0..w.len())
        .into_par_iter()
        .map(|q| {
            let cq = &w.cubes[q];
            let sum: f64 = w
                .cubes
                .iter()
                .map(|s| {
                    let dd = long_distance(cq, s);
                    s.side.powi(d) / (dd.powi(d) * phi_eta(dd))
                })
                .sum();
            LemmaRow { cube: q, partner: q, sum, ratio: sum * phi_eta(cq.side) }
        })
        .collect();
    Ok(LemmaReport::from_rows("sum_all_over", rows, eta, w))
}

/// `sup_P φ(l(P))^η Σ_{R : P ∈ Sh_ρ(R)} φ(l(R))^{-η}` with `ρ = w.rho`.
pub fn lemma_shadow_sum(
    w: &WhitneyDecomposition,
    phi: &KernelProfile,
    eta: f64,
    exps: &ExponentPair,
) -> Result<LemmaReport> {
    check_eta(eta, exps)?;
    let shadows: Vec<Vec<usize>> = (0..w.len()).into_par_iter().map(|r| shadow(w, r, w.rho)).collect();
    let mut acc = vec![0.0; w.len()];
    for (r, sh) in shadows.iter().enumerate() {
        let t = phi.eval_unchecked(w.cubes[r].side).powf(-eta);
        for &p in sh {
            acc[p] += t;
        }
    }
    let rows = acc
        .into_iter()
        .enumerate()
        .filter(|(_, s)| *s > 0.0)
        .map(|(p, sum)| LemmaRow {
            cube: p,
            partner: p,
            sum,
            ratio: sum * phi.eval_unchecked(w.cubes[p].side).powf(eta),
        })
        .collect();
    Ok(LemmaReport::from_rows("shadow_sum", rows, eta, w))
}

/// Sampling of shadow pairs for the chain sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSampling {
    pub pairs: usize,
    pub seed: u64,
}

impl Default for PairSampling {
    fn default() -> Self {
        Self { pairs: 200, seed: 7 }
    }
}

/// `sup φ(l(R))^{-κ} Σ_{P ∈ [S,R]} φ(l(P))^κ` over sampled `S ∈ Sh_ρ(R)`.
pub fn lemma_chain_sum(
    w: &WhitneyDecomposition,
    phi: &KernelProfile,
    kappa: f64,
    exps: &ExponentPair,
    sampling: PairSampling,
) -> Result<LemmaReport> {
    if kappa < exps.t2() - 1e-12 {
        return Err(Error::Precondition(format!("kappa = {kappa} is below 1/(q-1) = {}", exps.t2())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let pairs: Vec<(usize, usize)> = (0..sampling.pairs).map(|_| random_shadow_pair(w, w.rho, &mut rng)).collect();
    let rows: Vec<LemmaRow> = pairs
        .par_iter()
        .map(|&(s, r)| {
            let chain = admissible_chain(w, s, r)?;
            let sum: f64 = chain.cubes.iter().map(|&p| phi.eval_unchecked(w.cubes[p].side).powf(kappa)).sum();
            Ok(LemmaRow { cube: r, partner: s, sum, ratio: sum * phi.eval_unchecked(w.cubes[r].side).powf(-kappa) })
        })
        .collect::<Result<_>>()?;
    Ok(LemmaReport::from_rows("chain_sum", rows, kappa, w))
}

/// Chain sum for one explicit pair.
pub fn chain_ratio(w: &WhitneyDecomposition, phi: &KernelProfile, kappa: f64, s: usize, r: usize) -> Result<f64> {
    let chain = admissible_chain(w, s, r)?;
    let sum: f64 = chain.cubes.iter().map(|&p| phi.eval_unchecked(w.cubes[p].side).powf(kappa)).sum();
    Ok(sum * phi.eval_unchecked(w.cubes[r].side).powf(-kappa))
}
