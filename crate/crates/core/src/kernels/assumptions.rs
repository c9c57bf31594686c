//! Numerical checks of the Lévy-integrability (A1), dyadic-series (A2) and
//! doubling (A3) conditions on a kernel profile.

use serde::{Deserialize, Serialize};

use super::{ExponentPair, Kernel, KernelProfile};
use crate::error::{invalid, Error, Result};
use crate::quad::{geometric_tail, GaussLegendre};

/// Surface area of the unit sphere in R^d.
pub fn sphere_area(d: usize) -> f64 {
    use std::f64::consts::PI;
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

/// Logarithmically spaced points, both ends included.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| if i == n - 1 { hi } else { (a + (b - a) * i as f64 / (n - 1) as f64).exp() }).collect()
}

/// Default radius grid: 48 log-spaced points in `[1e-6 diam, diam)` for a
/// bounded domain, `[1e-6, 1e6]` otherwise.
pub fn default_r_grid(diam: Option<f64>) -> Vec<f64> {
    match diam {
        Some(d) => {
            let mut g = geomspace(1e-6 * d, d, 49);
            g.pop();
            g
        }
        None => geomspace(1e-6, 1e6, 48),
    }
}

/// Outcome of a dyadic layer summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerSum {
    pub partial: f64,
    pub tail_bound: f64,
    pub layers: usize,
    pub finite: bool,
}

impl LayerSum {
    pub fn value(&self) -> f64 {
        if self.finite {
            self.partial + self.tail_bound
        } else {
            f64::INFINITY
        }
    }
}

/// A1: `∫(1∧|y|^q) K(0,y) dy`, split at |y| = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A1Report {
    pub near: LayerSum,
    pub far: LayerSum,
    pub value: f64,
    pub abs_error: f64,
    pub pass: bool,
}

/// One radius of the A2 scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2Row {
    pub r: f64,
    /// `S1(r)` including its tail estimate (infinite when divergent).
    pub s1: f64,
    pub s2: f64,
    pub s1_tail: f64,
    pub s2_tail: f64,
    /// `φ(2r)/φ(r)`
    pub doubling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A2Report {
    pub rows: Vec<A2Row>,
    /// Empirical C2: sup over the grid of both series.
    pub constant: f64,
    pub sup_s1: f64,
    pub sup_s2: f64,
    /// Largest geometric-tail estimate used.
    pub tail_bound: f64,
    pub k_max: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A3Report {
    pub constant: f64,
    pub pass: bool,
}

/// Caps and cutoffs for the assumption checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub a1_cap: f64,
    pub a2_cap: f64,
    pub a3_cap: f64,
    pub k_max: usize,
    pub r_grid: Option<Vec<f64>>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { a1_cap: 1e6, a2_cap: 1e6, a3_cap: 1e3, k_max: 64, r_grid: None }
    }
}

/// Combined A1/A2/A3 audit of one kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub profile: KernelProfile,
    pub d: usize,
    pub exps: ExponentPair,
    pub diam: Option<f64>,
    pub a1: A1Report,
    pub a2: A2Report,
    pub a3: A3Report,
    pub r_grid: Vec<f64>,
    pub truncation_terms: usize,
    /// A1, A2, A3 verdicts.
    pub pass: [bool; 3],
}

impl AssumptionReport {
    /// CSV rows `r,S1,S2,ratio`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,S1,S2,ratio\n");
        for row in &self.a2.rows {
            s.push_str(&format!("{:e},{:e},{:e},{:e}\n", row.r, row.s1, row.s2, row.doubling));
        }
        s
    }
}

const A1_MAX_LAYERS: usize = 400;

fn radial_layers(integrand: impl Fn(f64) -> f64, toward_zero: bool, cap: f64) -> LayerSum {
    let rule = GaussLegendre::cached(16);
    let mut sum = 0.0;
    let mut prev = 0.0;
    let mut nondecreasing = 0usize;
    let ln2 = std::f64::consts::LN_2;
    for j in 0..A1_MAX_LAYERS {
        // layer in u = ln r; the factor r from dr = r du cancels the r^{-1}
        let (ua, ub) = if toward_zero {
            (-(j as f64 + 1.0) * ln2, -(j as f64) * ln2)
        } else {
            (j as f64 * ln2, (j as f64 + 1.0) * ln2)
        };
        let c = rule.integrate(ua, ub, |u| {
            let r = u.exp();
            integrand(r) * r
        });
        sum += c;
        if j > 0 && c >= prev * (1.0 - 1e-9) && c > 0.0 {
            nondecreasing += 1;
        } else {
            nondecreasing = 0;
        }
        if !sum.is_finite() || sum > cap || nondecreasing >= 8 {
            return LayerSum { partial: sum, tail_bound: f64::INFINITY, layers: j + 1, finite: false };
        }
        if j >= 2 {
            let t = geometric_tail(prev, c);
            if t.value.is_finite() && t.value <= 1e-15 * sum {
                return LayerSum { partial: sum, tail_bound: t.value, layers: j + 1, finite: true };
            }
        }
        prev = c;
    }
    let t = geometric_tail(prev, prev);
    let finite = sum + t.value <= cap;
    LayerSum { partial: sum, tail_bound: t.value, layers: A1_MAX_LAYERS, finite }
}

/// A1 check. The integral is reduced to the radial line with the sphere area
/// and summed over dyadic layers toward 0 and toward infinity.
pub fn check_a1(kernel: &Kernel, cap: f64) -> A1Report {
    let omega = sphere_area(kernel.d);
    let d = kernel.d as i32;
    let q = kernel.q;
    let g = |r: f64| omega * r.powf(q).min(1.0) * kernel.radial(r) * r.powi(d - 1);
    let near = radial_layers(g, true, cap);
    let far = radial_layers(g, false, cap);
    let value = near.value() + far.value();
    let pass = near.finite && far.finite && value <= cap;
    let abs_error = near.tail_bound + far.tail_bound;
    A1Report { near, far, value, abs_error, pass }
}

/// The strip tail condition `Σ_{n≥1} ∫_{|x|>n} K(0,x) dx`, written as
/// `∫_{|x|>1} (⌈|x|⌉ - 1) K(0,x) dx`. Unit shells are summed exactly up to
/// radius 64; beyond, the count is replaced by its mean `r - 1/2`.
pub fn check_strip_tail(kernel: &Kernel, cap: f64) -> LayerSum {
    const NEAR: usize = 64;
    let omega = sphere_area(kernel.d);
    let d = kernel.d as i32;
    let shell = |r: f64| omega * kernel.radial(r) * r.powi(d - 1);
    let rule = GaussLegendre::cached(16);
    let near: f64 = (1..NEAR).map(|k| k as f64 * rule.integrate(k as f64, k as f64 + 1.0, shell)).sum();
    let s = NEAR as f64;
    let mut far = radial_layers(|t| s * (s * t - 0.5) * shell(s * t), false, cap);
    far.partial += near;
    far.finite &= far.partial + far.tail_bound <= cap;
    far
}

fn check_r_grid(r_grid: &[f64], upper: Option<f64>) -> Result<()> {
    if r_grid.is_empty() {
        return Err(invalid("empty radius grid"));
    }
    for &r in r_grid {
        if !(r > 0.0) || upper.is_some_and(|u| r >= u) {
            return Err(invalid(format!("grid radius {r} outside the admissible range")));
        }
    }
    Ok(())
}

fn monotone_profile(kernel: &Kernel) -> Result<&KernelProfile> {
    let p = kernel.profile().ok_or_else(|| Error::Unsupported("the flat kernel has no radial profile".into()))?;
    if !p.is_monotone() {
        return Err(Error::Precondition(format!("profile {} is not nondecreasing", p.label())));
    }
    Ok(p)
}

/// Smallest k with `2^k r > diam`.
pub fn dyadic_steps(r: f64, diam: f64) -> usize {
    let mut k = 0usize;
    let mut s = r;
    while s <= diam {
        s *= 2.0;
        k += 1;
    }
    k
}

fn series(terms: impl Iterator<Item = f64>, truncated: bool) -> (f64, f64) {
    let mut sum = 0.0;
    let (mut prev, mut last) = (0.0, 0.0);
    for t in terms {
        sum += t;
        prev = last;
        last = t;
    }
    if !truncated {
        return (sum, 0.0);
    }
    let tail = geometric_tail(prev, last).value;
    (sum, tail)
}

/// A2 check: sup over `r_grid` of both dyadic series. `diam = None` means an
/// unbounded domain.
pub fn check_a2(
    kernel: &Kernel,
    exps: &ExponentPair,
    diam: Option<f64>,
    r_grid: &[f64],
    k_max: usize,
    cap: f64,
) -> Result<A2Report> {
    let phi = monotone_profile(kernel)?;
    check_r_grid(r_grid, diam)?;
    if k_max < 2 {
        return Err(invalid("k_max must be at least 2"));
    }
    let (t1, t2) = (exps.t1(), exps.t2());
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let pr = phi.eval_unchecked(r);
        let n = diam.map(|dm| dyadic_steps(r, dm)).unwrap_or(usize::MAX);
        let k1 = n.min(k_max);
        let (s1, s1_tail) =
            series((1..=k1).map(|k| (pr / phi.eval_unchecked(r * 2f64.powi(k as i32))).powf(t1)), n > k_max);
        let (s2, s2_tail) =
            series((1..=k_max).map(|k| (phi.eval_unchecked(r * 0.5f64.powi(k as i32)) / pr).powf(t2)), true);
        rows.push(A2Row {
            r,
            s1: s1 + s1_tail,
            s2: s2 + s2_tail,
            s1_tail,
            s2_tail,
            doubling: phi.eval_unchecked(2.0 * r) / pr,
        });
    }
    let sup_s1 = rows.iter().map(|r| r.s1).fold(0.0, f64::max);
    let sup_s2 = rows.iter().map(|r| r.s2).fold(0.0, f64::max);
    let tail_bound = rows.iter().map(|r| r.s1_tail.max(r.s2_tail)).fold(0.0, f64::max);
    let constant = sup_s1.max(sup_s2);
    Ok(A2Report { rows, constant, sup_s1, sup_s2, tail_bound, k_max, pass: constant.is_finite() && constant <= cap })
}

/// A3 check: sup of `φ(2r)/φ(r)` over `r_grid ⊂ (0, 3 diam)`.
pub fn check_a3(profile: &KernelProfile, diam: Option<f64>, r_grid: &[f64], cap: f64) -> Result<A3Report> {
    check_r_grid(r_grid, diam.map(|d| 3.0 * d))?;
    let constant = r_grid
        .iter()
        .map(|&r| profile.eval_unchecked(2.0 * r) / profile.eval_unchecked(r))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(A3Report { constant, pass: constant.is_finite() && constant <= cap })
}

/// Runs A1, A2 and A3 for one kernel.
pub fn audit(kernel: &Kernel, exps: &ExponentPair, diam: Option<f64>, cfg: &AuditConfig) -> Result<AssumptionReport> {
    let profile = monotone_profile(kernel)?.clone();
    let r_grid = cfg.r_grid.clone().unwrap_or_else(|| default_r_grid(diam));
    let a1 = check_a1(kernel, cfg.a1_cap);
    let a2 = check_a2(kernel, exps, diam, &r_grid, cfg.k_max, cfg.a2_cap)?;
    let a3 = check_a3(&profile, diam, &r_grid, cfg.a3_cap)?;
    let pass = [a1.pass, a2.pass, a3.pass];
    Ok(AssumptionReport {
        profile,
        d: kernel.d,
        exps: *exps,
        diam,
        a1,
        a2,
        a3,
        r_grid,
        truncation_terms: cfg.k_max,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        use std::f64::consts::PI;
        assert_eq!(sphere_area(1), 2.0);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn dyadic_steps_counts() {
        assert_eq!(dyadic_steps(0.3, 1.0), 2);
        assert_eq!(dyadic_steps(0.5, 1.0), 2);
        assert_eq!(dyadic_steps(0.6, 1.0), 1);
    }

    #[test]
    fn default_grid_stays_below_diameter() {
        let g = default_r_grid(Some(2.0));
        assert_eq!(g.len(), 48);
        assert!(g.iter().all(|&r| r < 2.0));
        assert!((g[0] - 2e-6).abs() < 1e-18);
    }
}
