//! Seminorms on strips `R × (0,1)^l` for functions of `x₁` alone.
//!
//! With `t = y₁ - x₁` and `p = q` the `x₁` integral can be done first:
//! `A(t) = ∫ |f(x₁) - f(x₁ + t)|^q dx₁` is a one-dimensional integral over
//! the compact support, so no window on the unbounded axis is needed. What
//! remains is an integral over `t` and the cross-section.

use std::f64::consts::PI;

use super::config::QuadratureConfig;
use super::ladder::{integrate_nodes, ladder_integrate, RawLadder, Tracker};
use super::polar::sweep_rectangle;
use super::testfn::TestFunction;
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::quad::{geometric_panels, layers_toward_hi, layers_toward_lo, scaled_panels, GaussLegendre, Panel};

const A_ORDER: usize = 10;

/// `A(t)` together with the kink locations it inherits from `f`.
pub(crate) struct Increments<'a> {
    f: &'a TestFunction,
    q: f64,
    support: (f64, f64),
    breaks: Vec<f64>,
    /// Positive differences of breakpoints, where `A` has kinks.
    pub kinks: Vec<f64>,
}

impl<'a> Increments<'a> {
    pub fn new(f: &'a TestFunction, q: f64) -> Result<Self> {
        if !f.depends_on_first_axis_only() {
            return Err(Error::Unsupported(format!("strip seminorms need a function of x1 alone, got {}", f.label())));
        }
        let support = f.support().ok_or_else(|| {
            Error::Unsupported(format!("strip seminorms need compact support in x1, got {}", f.label()))
        })?;
        let mut breaks = f.breakpoints();
        breaks.extend([support.0, support.1]);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut kinks: Vec<f64> =
            breaks.iter().flat_map(|a| breaks.iter().map(move |b| (b - a).abs())).filter(|&t| t > 0.0).collect();
        kinks.sort_by(f64::total_cmp);
        kinks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        Ok(Self { f, q, support, breaks, kinks })
    }

    /// `∫ |f(x) - f(x + t)|^q dx` for `t ≥ 0`.
    pub fn eval(&self, t: f64) -> f64 {
        let (a, b) = self.support;
        if a == b {
            return 0.0;
        }
        let lo = a - t;
        let mut cuts: Vec<f64> = self.breaks.iter().flat_map(|&c| [c, c - t]).filter(|&c| c > lo && c < b).collect();
        cuts.extend([lo, b]);
        cuts.sort_by(f64::total_cmp);
        let rule = GaussLegendre::cached(A_ORDER);
        cuts.windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| rule.integrate(w[0], w[1], |x| (self.f.eval1(x) - self.f.eval1(x + t)).abs().powf(self.q)))
            .sum()
    }

    pub fn cost(&self) -> usize {
        A_ORDER * 2 * (self.breaks.len() + 1)
    }
}

/// `∫_{w0}^{w1} K(√w) dw`, in closed form when the kernel allows it.
fn sqrt_integral(kernel: &Kernel, w0: f64, w1: f64, order: usize) -> f64 {
    if w1 <= w0 {
        return 0.0;
    }
    kernel
        .sqrt_antiderivative(w0, w1)
        .unwrap_or_else(|| scaled_panels(w0, w1, w0.max(1e-300), order, |w| kernel.radial(w.sqrt())))
}

/// `∫_{z0}^{z1} K(√(t² + z²)) dz`.
fn line_integral(kernel: &Kernel, t: f64, z0: f64, z1: f64, order: usize) -> f64 {
    if z1 <= z0 {
        return 0.0;
    }
    let scale = t.max(z0).min(z1 - z0);
    scaled_panels(z0, z1, scale, order, |z| kernel.radial((t * t + z * z).sqrt()))
}

struct Slab<'a> {
    inc: Increments<'a>,
    kernel: &'a Kernel,
    l: usize,
    cfg: &'a QuadratureConfig,
    track: Tracker,
}

impl Slab<'_> {
    /// Kernel mass of the cross-section outside the disc of radius `s`
    /// around `x'` at axial offset `t`.
    fn outside(&self, xp: [f64; 2], t: f64, s: f64) -> f64 {
        let order = self.cfg.order;
        if self.l == 1 {
            return line_integral(self.kernel, t, s, xp[0], order)
                + line_integral(self.kernel, t, s, 1.0 - xp[0], order);
        }
        let (t2, s2) = (t * t, s * s);
        let mut h = 0.0;
        let mut n = 0;
        sweep_rectangle([0.0, 0.0], [1.0, 1.0], xp, self.cfg.sector_order, |_, w, rb| {
            h += w * 0.5 * sqrt_integral(self.kernel, t2 + s2, t2 + rb * rb, order);
            n += 1;
        });
        self.track.count(n);
        h
    }

    /// Kernel mass of the cross-section inside the disc of radius `s1`
    /// and outside radius `s0` at axial offset `t`.
    fn annulus(&self, t: f64, s0: f64, s1: f64) -> f64 {
        if self.l == 1 {
            2.0 * line_integral(self.kernel, t, s0, s1, self.cfg.order)
        } else {
            PI * sqrt_integral(self.kernel, t * t + s0 * s0, t * t + s1 * s1, self.cfg.order)
        }
    }

    /// Panels in `t`: origin layers (sequence 0), layers toward each ball
    /// radius, geometric panels through the kinks of `A`, then doubling far
    /// panels (sequence 1).
    fn t_panels(&self, radii: &[f64]) -> Vec<Panel> {
        let cfg = self.cfg;
        let mut panels = Vec::new();
        let r_max = radii.last().copied().unwrap_or(0.0);
        let first_kink = self.inc.kinks.first().copied().unwrap_or(1.0);
        let start = if r_max > 0.0 { r_max } else { first_kink.min(1.0) };
        let mut cuts = vec![0.0];
        cuts.extend(radii.iter().copied().filter(|&r| r > 0.0));
        cuts.extend(self.inc.kinks.iter().copied().filter(|&k| k < start));
        if r_max == 0.0 {
            cuts.push(start);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for (i, w) in cuts.windows(2).enumerate() {
            let (s0, s1) = (w[0], w[1]);
            let mid = 0.5 * (s0 + s1);
            if i == 0 {
                // below t_floor the differences f(x) - f(x + t) are mostly roundoff
                let t_floor = 1e-9 * first_kink;
                let depth = (mid / t_floor).log2().floor().max(2.0) as usize;
                layers_toward_lo(s0, mid, cfg.sing_split.min(depth), 0, &mut panels);
            } else {
                let at = panels.len();
                layers_toward_lo(s0, mid, cfg.edge_layers, 0, &mut panels);
                panels[at..].iter_mut().for_each(|p| p.layer = None);
            }
            let at = panels.len();
            layers_toward_hi(mid, s1, cfg.edge_layers, 0, &mut panels);
            panels[at..].iter_mut().for_each(|p| p.layer = None);
        }
        let mut far = vec![start];
        far.extend(self.inc.kinks.iter().copied().filter(|&k| k > start));
        for w in far.windows(2) {
            geometric_panels(w[0], w[1], &mut panels);
        }
        let mut a = *far.last().expect("nonempty");
        for j in 0..cfg.boundary_layers {
            panels.push(Panel { lo: a, hi: 2.0 * a, layer: Some((1, j)) });
            a *= 2.0;
        }
        panels
    }

    /// Cumulative region values at cross-section point `xp` with boundary
    /// distance `delta`: `[with tails ..., without tails ...]`.
    fn inner(&self, xp: [f64; 2], delta: f64, thetas: &[f64]) -> Vec<f64> {
        let m = thetas.len() + 1;
        let radii: Vec<f64> = thetas.iter().map(|th| th * delta).collect();
        let r_max = radii.last().copied().unwrap_or(0.0);
        let panels = self.t_panels(&radii);
        let rule = GaussLegendre::cached(self.cfg.order);
        let per_node = self.inc.cost() + 2 * self.cfg.order * (m + 1);
        let s = ladder_integrate(&panels, rule, 2, 1, m, |t, out| {
            let a = self.inc.eval(t);
            if a == 0.0 {
                return;
            }
            let mut w = 0.0;
            let mut s_prev = 0.0;
            for k in 0..m - 1 {
                if t < radii[k] {
                    let sk = (radii[k] * radii[k] - t * t).sqrt();
                    w += self.annulus(t, s_prev, sk);
                    s_prev = sk;
                }
                out[k] = a * w;
            }
            let s_out = if t < r_max { (r_max * r_max - t * t).sqrt() } else { 0.0 };
            out[m - 1] = a * (w + self.outside(xp, t, s_out));
        });
        self.track.count(panels.len() * rule.order() * per_node);
        self.track.note(s.status);
        let mut out = vec![0.0; 2 * m];
        for k in 0..m {
            // both sides of t = 0 contribute equally
            out[k] = 2.0 * s.with_tail(k);
            out[m + k] = 2.0 * s.body[k];
        }
        out
    }
}

fn check(kernel: &Kernel, l: usize, p: f64, q: f64) -> Result<()> {
    if !(l == 1 || l == 2) {
        return Err(Error::Unsupported(format!("strip cross-sections of dimension {l}; only 1 and 2 are implemented")));
    }
    if kernel.d != l + 1 {
        return Err(Error::InvalidArgument(format!(
            "kernel dimension {} does not match the strip R x (0,1)^{l}",
            kernel.d
        )));
    }
    if p != q {
        return Err(Error::Unsupported("strip seminorms need p = q".into()));
    }
    Ok(())
}

/// Ladder on `R × (0,1)^l` for a compactly supported function of `x₁`.
pub(crate) fn strip_ladder(
    f: &TestFunction,
    kernel: &Kernel,
    p: f64,
    q: f64,
    l: usize,
    thetas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<RawLadder> {
    check(kernel, l, p, q)?;
    let slab = Slab { inc: Increments::new(f, q)?, kernel, l, cfg, track: Tracker::default() };
    let m = thetas.len() + 1;
    let rule = GaussLegendre::cached(cfg.order);
    // δ = x₂ on 0 < x₂ ≤ 1/2 (and x₂ ≤ x₃ ≤ 1/2 for l = 2), by symmetry
    let mut panels = Vec::new();
    layers_toward_lo(0.0, 0.5, cfg.boundary_layers, 0, &mut panels);
    let s = integrate_nodes(&panels, rule, 1, 2, m, |x2| {
        if l == 1 {
            let mut v = slab.inner([x2, 0.0], x2, thetas);
            v.iter_mut().for_each(|x| *x *= 2.0);
            return v;
        }
        let mut acc = vec![0.0; 2 * m];
        let cross = GaussLegendre::cached(cfg.order);
        let segs = 2;
        let h = (0.5 - x2) / segs as f64;
        for j in 0..segs {
            let lo = x2 + h * j as f64;
            cross.map(lo, lo + h, |x3, w| {
                let v = slab.inner([x2, x3], x2, thetas);
                acc.iter_mut().zip(&v).for_each(|(a, b)| *a += 8.0 * w * b);
            });
        }
        acc
    });
    Ok(RawLadder::from_sum(&s, m, &slab.track))
}

/// `κ_l(t) = ∫_{(0,1)^l} ∫_{(0,1)^l} K(√(t² + |x' - y'|²)) dy' dx'`.
pub fn cross_section_kernel(kernel: &Kernel, l: usize, t: f64, order: usize) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::Singularity("cross-section kernel at zero axial offset".into()));
    }
    let t = t.abs();
    match l {
        1 => Ok(2.0 * scaled_panels(0.0, 1.0, t, order, |s| (1.0 - s) * kernel.radial((t * t + s * s).sqrt()))),
        2 => Ok(4.0
            * scaled_panels(0.0, 1.0, t, order, |s1| {
                let a2 = t * t + s1 * s1;
                (1.0 - s1)
                    * scaled_panels(0.0, 1.0, a2.sqrt(), order, |s2| (1.0 - s2) * kernel.radial((a2 + s2 * s2).sqrt()))
            })),
        _ => Err(Error::Unsupported(format!("cross-section dimension {l}"))),
    }
}

/// Full strip seminorm (p-th power) by the independent route
/// `2 ∫₀^∞ A(t) κ_l(t) dt`. Returns `(value, tail)`.
pub fn strip_full_by_cross_section(
    f: &TestFunction,
    kernel: &Kernel,
    q: f64,
    l: usize,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    check(kernel, l, q, q)?;
    let inc = Increments::new(f, q)?;
    let slab = Slab { inc, kernel, l, cfg, track: Tracker::default() };
    let panels = slab.t_panels(&[]);
    let rule = GaussLegendre::cached(cfg.order);
    let order = cfg.order;
    let s = integrate_nodes(&panels, rule, 2, 1, 1, |t| {
        let a = slab.inc.eval(t);
        vec![if a == 0.0 { 0.0 } else { a * cross_section_kernel(kernel, l, t, order).expect("t > 0") }]
    });
    Ok((2.0 * s.with_tail(0), 2.0 * s.tail[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_panels;

    #[test]
    fn increment_of_a_ramp() {
        let f = TestFunction::StripRamp { n: 1.0 };
        let inc = Increments::new(&f, 2.0).unwrap();
        for &t in &[0.1, 0.7, 1.5, 3.0] {
            let direct = gauss_panels(-4.0, 4.0, 800, 6, |x| (f.eval1(x) - f.eval1(x + t)).powi(2));
            assert!((inc.eval(t) - direct).abs() < 1e-9, "t={t}");
        }
        // disjoint supports: twice ∫ f² = 4/3
        assert!((inc.eval(5.0) - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(inc.kinks, vec![1.0, 2.0]);
    }
}
