//! Full and truncated seminorms of explicit test functions.
//!
//! All values for one call come from one node set: the truncated regions
//! `B(x, θ δ(x))` are unions of pieces of the full region, so
//! `truncated(θ₁) ≤ truncated(θ₂) ≤ full` holds exactly for `θ₁ ≤ θ₂`.

mod config;
mod exact;
mod ladder;
mod polar;
mod ray;
mod slab;
mod testfn;

use serde::{Deserialize, Serialize};

pub use config::{QuadratureConfig, TailMode};
pub use exact::{
    const_kernel_truncated_bound, exact_const_kernel_full, exact_hilbert_subintegral, hilbert_subintegral_quadrature,
    strip_effective_kernel, EffectiveKernel,
};
pub use slab::{cross_section_kernel, strip_full_by_cross_section};
pub use testfn::TestFunction;

use crate::error::{invalid, Error, Result};
use crate::geometry::Domain;
use crate::kernels::{ExponentPair, Kernel};
use ladder::{RawLadder, TailStatus};

/// One seminorm value with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormEstimate {
    /// The seminorm, with the outer `1/p` power applied.
    pub value: f64,
    /// `value^p`, the un-rooted double integral.
    pub integral: f64,
    /// `p/q`.
    pub inner_power: f64,
    /// Difference between the last two refinement levels, in `value` units.
    pub abs_error: f64,
    /// `value` at the previous refinement level.
    pub previous: f64,
    /// Extrapolated tail contribution to `integral` (added or only reported
    /// depending on the tail mode).
    pub tail: f64,
    pub evaluations: usize,
    pub truncated_domain: bool,
    pub theta: Option<f64>,
    /// A layer series kept growing; `value` is infinite in add mode.
    pub diverging: bool,
    /// The tolerance was not met or a tail estimate was unreliable.
    pub low_confidence: bool,
}

impl SeminormEstimate {
    fn zero(theta: Option<f64>, inner_power: f64) -> Self {
        Self {
            value: 0.0,
            integral: 0.0,
            inner_power,
            abs_error: 0.0,
            previous: 0.0,
            tail: 0.0,
            evaluations: 0,
            truncated_domain: theta.is_some(),
            theta,
            diverging: false,
            low_confidence: false,
        }
    }

    pub fn value_squared(&self) -> f64 {
        self.value * self.value
    }
}

/// Truncated seminorms for increasing `θ` and the full seminorm, all on one
/// node set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormLadder {
    pub thetas: Vec<f64>,
    pub truncated: Vec<SeminormEstimate>,
    pub full: SeminormEstimate,
}

impl SeminormLadder {
    /// `truncated(θ₁) ≤ truncated(θ₂) ≤ full` for `θ₁ ≤ θ₂`, compared exactly.
    pub fn is_region_monotone(&self) -> bool {
        let mut v: Vec<f64> = self.truncated.iter().map(|t| t.value).collect();
        v.push(self.full.value);
        v.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Full over truncated seminorm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityReport {
    pub theta: f64,
    pub full: SeminormEstimate,
    pub truncated: SeminormEstimate,
    pub ratio: f64,
    /// The truncated seminorm vanished while the full one did not.
    pub infinite: bool,
}

impl ComparabilityReport {
    pub fn ratio_squared(&self) -> f64 {
        self.ratio * self.ratio
    }
}

fn check_inputs(
    f: &TestFunction,
    domain: &Domain,
    kernel: &Kernel,
    thetas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<()> {
    cfg.validate()?;
    f.validate()?;
    if kernel.d != domain.dim() {
        return Err(invalid(format!(
            "kernel dimension {} does not match the domain dimension {}",
            kernel.d,
            domain.dim()
        )));
    }
    if f.min_dim() > domain.dim() {
        return Err(invalid(format!("{} needs dimension {}", f.label(), f.min_dim())));
    }
    if let Some(t) = thetas.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(invalid(format!("θ must lie in (0, 1], got {t}")));
    }
    if thetas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("θ values must be strictly increasing"));
    }
    Ok(())
}

fn run(
    f: &TestFunction,
    domain: &Domain,
    kernel: &Kernel,
    exps: &ExponentPair,
    thetas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<RawLadder> {
    let (p, q) = (exps.p, exps.q);
    match domain {
        Domain::Interval { a, b } => Ok(ray::interval_ladder(f, kernel, p, q, *a, *b, thetas, cfg)),
        Domain::Box(bx) if bx.dim() == 1 => Ok(ray::interval_ladder(f, kernel, p, q, bx.lo[0], bx.hi[0], thetas, cfg)),
        Domain::Box(bx) if bx.dim() == 2 => {
            Ok(ray::box_ladder(f, kernel, p, q, [bx.lo[0], bx.lo[1]], [bx.hi[0], bx.hi[1]], thetas, cfg))
        }
        Domain::Box(bx) => Err(Error::Unsupported(format!("seminorms on {}-dimensional boxes", bx.dim()))),
        Domain::Strip { k: 1, l } => slab::strip_ladder(f, kernel, p, q, *l, thetas, cfg),
        Domain::Strip { k, .. } => Err(Error::Unsupported(format!("strips with {k} unbounded axes"))),
        Domain::Union(_) => Err(Error::Unsupported("seminorms on nonconvex unions of boxes".into())),
    }
}

fn integral_of(raw: &RawLadder, k: usize, mode: TailMode) -> f64 {
    match mode {
        TailMode::Add => raw.with_tail[k],
        TailMode::Report => raw.without_tail[k],
    }
}

/// Truncated seminorms for each `θ` (strictly increasing in `(0, 1]`) and
/// the full seminorm, from one node set. The error estimate compares
/// successive refinements of `cfg`.
pub fn seminorm_ladder(
    f: &TestFunction,
    domain: &Domain,
    kernel: &Kernel,
    exps: &ExponentPair,
    thetas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SeminormLadder> {
    check_inputs(f, domain, kernel, thetas, cfg)?;
    let m = thetas.len() + 1;
    let theta_of = |k: usize| thetas.get(k).copied();
    let inner_power = exps.p / exps.q;
    if f.is_constant() {
        let mut all: Vec<SeminormEstimate> = (0..m).map(|k| SeminormEstimate::zero(theta_of(k), inner_power)).collect();
        let full = all.pop().expect("full region");
        return Ok(SeminormLadder { thetas: thetas.to_vec(), truncated: all, full });
    }
    let root = |v: f64| v.max(0.0).powf(1.0 / exps.p);
    let mut level = cfg.clone();
    let mut coarse = run(f, domain, kernel, exps, thetas, &level)?;
    let mut evaluations = coarse.evaluations;
    let mut errors = vec![f64::INFINITY; m];
    let mut previous = vec![f64::NAN; m];
    for _ in 0..cfg.max_refine {
        level = level.refined();
        let fine = run(f, domain, kernel, exps, thetas, &level)?;
        evaluations += fine.evaluations;
        for k in 0..m {
            previous[k] = root(integral_of(&coarse, k, cfg.tail_mode));
            errors[k] = (root(integral_of(&fine, k, cfg.tail_mode)) - previous[k]).abs();
        }
        coarse = fine;
        let met = (0..m).all(|k| errors[k] <= cfg.tolerance(root(integral_of(&coarse, k, cfg.tail_mode))));
        if met {
            break;
        }
    }
    let raw = coarse;
    let mut all: Vec<SeminormEstimate> = (0..m)
        .map(|k| {
            let integral = integral_of(&raw, k, cfg.tail_mode);
            let tail = raw.with_tail[k] - raw.without_tail[k];
            let diverging = !raw.with_tail[k].is_finite();
            let value = root(integral);
            let low_confidence = !diverging && (raw.status != TailStatus::Ok || !(errors[k] <= cfg.tolerance(value)));
            SeminormEstimate {
                value,
                integral,
                inner_power,
                abs_error: if diverging { f64::INFINITY } else { errors[k] },
                previous: previous[k],
                tail,
                evaluations,
                truncated_domain: k + 1 < m,
                theta: theta_of(k),
                diverging,
                low_confidence,
            }
        })
        .collect();
    let full = all.pop().expect("full region");
    Ok(SeminormLadder { thetas: thetas.to_vec(), truncated: all, full })
}

pub fn full_seminorm(
    f: &TestFunction,
    domain: &Domain,
    kernel: &Kernel,
    exps: &ExponentPair,
    cfg: &QuadratureConfig,
) -> Result<SeminormEstimate> {
    Ok(seminorm_ladder(f, domain, kernel, exps, &[], cfg)?.full)
}

/// Seminorm over `{(x, y) : |x - y| < θ δ(x)}`.
pub fn truncated_seminorm(
    f: &TestFunction,
    domain: &Domain,
    kernel: &Kernel,
    exps: &ExponentPair,
    theta: f64,
    cfg: &QuadratureConfig,
) -> Result<SeminormEstimate> {
    let mut l = seminorm_ladder(f, domain, kernel, exps, &[theta], cfg)?;
    Ok(l.truncated.remove(0))
}

/// `full / truncated` from one node set, so the ratio is at least one.
pub fn comparability_ratio(
    f: &TestFunction,
    domain: &Domain,
    kernel: &Kernel,
    exps: &ExponentPair,
    theta: f64,
    cfg: &QuadratureConfig,
) -> Result<ComparabilityReport> {
    let mut l = seminorm_ladder(f, domain, kernel, exps, &[theta], cfg)?;
    let truncated = l.truncated.remove(0);
    let full = l.full;
    if full.value == 0.0 {
        return Err(Error::Precondition(format!("{} has zero seminorm; the ratio is undefined", f.label())));
    }
    let infinite = truncated.value == 0.0;
    let ratio = if infinite { f64::INFINITY } else { full.value / truncated.value };
    Ok(ComparabilityReport { theta, full, truncated, ratio, infinite })
}
