//! Seminorms on intervals and planar boxes by integration along rays.
//!
//! For an outer point `x` the inner integral is written in polar form around
//! `x`. Each ray is cut at the radii `θ_k δ(x)` of the nested balls and at the
//! exit distance, so every region of the ladder is a union of pieces and the
//! values are ordered exactly.

use std::f64::consts::TAU;

use super::config::QuadratureConfig;
use super::ladder::{estimate_tail, integrate_nodes, ladder_integrate, RawLadder, TailEst, TailStatus, Tracker};
use super::polar::sweep_rectangle;
use super::testfn::TestFunction;
use crate::kernels::Kernel;
use crate::quad::{layer_sums, layers_toward_hi, layers_toward_lo, GaussLegendre, Panel};

struct Ctx<'a> {
    f: &'a TestFunction,
    kernel: &'a Kernel,
    q: f64,
    power: f64,
    cfg: &'a QuadratureConfig,
    /// Graded ends at the boundary get tails; otherwise a closing panel.
    open_ends: bool,
    track: Tracker,
}

impl Ctx<'_> {
    /// `|f(x) - f(y)|^q K(ρ) ρ^{d-1}`
    #[inline]
    fn radial(&self, fx: f64, fy: f64, rho: f64, d: usize) -> f64 {
        let df = (fx - fy).abs();
        if df == 0.0 {
            return 0.0;
        }
        let jac = if d == 2 { rho } else { 1.0 };
        df.powf(self.q) * self.kernel.radial(rho) * jac
    }
}

/// Caps a dyadic layer count toward `end` so the finest layer stays well
/// above the float spacing at `end`.
pub(crate) fn resolvable(from: f64, end: f64, layers: usize) -> usize {
    if end == 0.0 {
        return layers;
    }
    let depth = ((from - end).abs() / (end.abs() * 1e-12)).log2().floor();
    layers.min(depth.max(2.0) as usize)
}

/// `n` untagged dyadic layers on `[lo, hi]` toward `lo`, closed by the end
/// panel.
fn closed_toward_lo(lo: f64, hi: f64, n: usize, out: &mut Vec<Panel>) {
    let n = resolvable(hi, lo, n);
    out.push(Panel { lo, hi: lo + (hi - lo) * 0.5f64.powi(n as i32), layer: None });
    let at = out.len();
    layers_toward_lo(lo, hi, n, 0, out);
    out[at..].iter_mut().for_each(|p| p.layer = None);
}

fn closed_toward_hi(lo: f64, hi: f64, n: usize, out: &mut Vec<Panel>) {
    let n = resolvable(lo, hi, n);
    let at = out.len();
    layers_toward_hi(lo, hi, n, 0, out);
    out[at..].iter_mut().for_each(|p| p.layer = None);
    out.push(Panel { lo: hi - (hi - lo) * 0.5f64.powi(n as i32), hi, layer: None });
}

/// Untagged layers on `[lo, hi]`: `n_lo` toward `lo` and `n_hi` toward `hi`.
fn plain_layers(lo: f64, hi: f64, n_lo: usize, n_hi: usize, out: &mut Vec<Panel>) {
    let mid = 0.5 * (lo + hi);
    closed_toward_lo(lo, mid, n_lo, out);
    closed_toward_hi(mid, hi, n_hi, out);
}

/// Layers toward `lo > 0` needed for panels to stay within a factor two in
/// `ρ`, where the kernel varies.
fn radial_depth(lo: f64, hi: f64) -> usize {
    ((hi - lo) / lo).log2().ceil().max(0.0) as usize
}

/// Integral over `ρ ∈ [a, b]` of `g`, split at `kinks` of `f` along the ray.
/// The origin is graded toward 0, kinks from both sides, and when `edge` is
/// set the far end is graded toward `b`. Returns `(body, tail)`.
fn radial_piece(ctx: &Ctx, a: f64, b: f64, edge: bool, kinks: &[f64], mut g: impl FnMut(f64) -> f64) -> (f64, f64) {
    let cfg = ctx.cfg;
    let rule = GaussLegendre::cached(cfg.order);
    let kink_layers = (cfg.edge_layers / 2).max(2);
    let mut cuts = vec![(a, false)];
    cuts.extend(kinks.iter().filter(|&&c| c > a * (1.0 + 1e-12) && c < b * (1.0 - 1e-12)).map(|&c| (c, true)));
    cuts.push((b, false));
    let mut body = 0.0;
    let mut tail = 0.0;
    let mut panels = Vec::new();
    for (i, w) in cuts.windows(2).enumerate() {
        let ((s0, kink0), (s1, kink1)) = (w[0], w[1]);
        let at_edge = edge && i == cuts.len() - 2;
        let mid = 0.5 * (s0 + s1);
        panels.clear();
        let n_lo = if s0 > 0.0 { radial_depth(s0, mid) + if kink0 { kink_layers } else { 1 } } else { 0 };
        let n_hi = if kink1 { kink_layers } else { 1 };
        match (s0 == 0.0, at_edge) {
            (true, false) if !kink1 => layers_toward_lo(0.0, s1, cfg.sing_split, 0, &mut panels),
            (true, false) => {
                layers_toward_lo(0.0, mid, cfg.sing_split, 0, &mut panels);
                plain_layers(mid, s1, 1, n_hi, &mut panels);
            }
            (true, true) => layers_toward_lo(0.0, mid, cfg.sing_split, 0, &mut panels),
            (false, true) => plain_layers(s0, mid, n_lo, 1, &mut panels),
            (false, false) => plain_layers(s0, s1, n_lo, n_hi, &mut panels),
        }
        if at_edge && ctx.open_ends {
            layers_toward_hi(mid, s1, resolvable(mid, s1, cfg.edge_layers), 1, &mut panels);
        } else if at_edge {
            closed_toward_hi(mid, s1, cfg.edge_layers, &mut panels);
        }
        let (s, seqs) = layer_sums(&panels, rule, 2, &mut g);
        ctx.track.count(panels.len() * rule.order());
        body += s;
        for seq in &seqs {
            let mut t = estimate_tail(seq);
            if t.status == TailStatus::Diverging && s0 == 0.0 && std::ptr::eq(seq, &seqs[0]) {
                t = origin_model_tail(ctx, seq, s1 * 0.5f64.powi(cfg.sing_split as i32)).unwrap_or(t);
            }
            ctx.track.note(t.status);
            tail += t.value;
        }
    }
    (body, tail)
}

/// A growing origin sequence for a locally Lipschitz `f` is a transient
/// (`Δf` crossing zero along the ray) when `ρ^q K(ρ) ρ^{d-1}` is integrable
/// at 0. The tail then follows the layer ratio of that model at the finest
/// layer `rho`, and is flagged unreliable.
fn origin_model_tail(ctx: &Ctx, seq: &[f64], rho: f64) -> Option<TailEst> {
    let d = ctx.kernel.d as i32;
    let rule = GaussLegendre::cached(8);
    let layer = |hi: f64| rule.integrate(0.5 * hi, hi, |r| r.powf(ctx.q) * ctx.kernel.radial(r) * r.powi(d - 1));
    let r = layer(0.5 * rho) / layer(rho);
    if !(r < 1.0) {
        return None;
    }
    let last = *seq.last()?;
    Some(TailEst { value: last * r / (1.0 - r), status: TailStatus::Unreliable })
}

/// Writes `[cumulative with tails ..., cumulative without tails ...]`, each
/// raised to `p/q`.
fn finish(ctx: &Ctx, add: &[f64], rep: &[f64], out: &mut [f64]) {
    let m = add.len();
    let (mut ca, mut cr) = (0.0, 0.0);
    for k in 0..m {
        ca += add[k];
        cr += rep[k];
        out[k] = ca.powf(ctx.power);
        out[m + k] = cr.powf(ctx.power);
    }
}

fn inner_interval(ctx: &Ctx, a: f64, b: f64, x: f64, thetas: &[f64], kinks: &[f64], out: &mut [f64]) {
    let m = thetas.len() + 1;
    let delta = (x - a).min(b - x);
    let fx = ctx.f.eval1(x);
    let mut add = vec![0.0; m];
    let mut rep = vec![0.0; m];
    let mut along = Vec::new();
    for u in [-1.0f64, 1.0] {
        let rho_max = if u > 0.0 { b - x } else { x - a };
        along.clear();
        along.extend(kinks.iter().map(|c| (c - x) * u).filter(|&r| r > 0.0 && r < rho_max));
        along.sort_by(f64::total_cmp);
        let mut lo = 0.0;
        for k in 0..m {
            let hi = if k + 1 < m { thetas[k] * delta } else { rho_max };
            if hi > lo {
                let (body, tail) =
                    radial_piece(ctx, lo, hi, hi >= rho_max, &along, |r| ctx.radial(fx, ctx.f.eval1(x + u * r), r, 1));
                add[k] += body + tail;
                rep[k] += body;
            }
            lo = lo.max(hi);
        }
    }
    finish(ctx, &add, &rep, out);
}

/// Outer panels between `cuts`, each cut with its own layer count. With
/// `open` the two domain ends carry tagged sequences 0 and 1 for tail
/// estimates, otherwise they are closed.
fn outer_panels(cuts: &[(f64, usize)], open: bool, out: &mut Vec<Panel>) {
    let n = cuts.len() - 1;
    for i in 0..n {
        let ((s0, l0), (s1, l1)) = (cuts[i], cuts[i + 1]);
        let mid = 0.5 * (s0 + s1);
        if i == 0 && open {
            layers_toward_lo(s0, mid, resolvable(mid, s0, l0), 0, out);
        } else {
            closed_toward_lo(s0, mid, l0, out);
        }
        if i == n - 1 && open {
            layers_toward_hi(mid, s1, resolvable(mid, s1, l1), 1, out);
        } else {
            closed_toward_hi(mid, s1, l1, out);
        }
    }
}

/// Cuts for a direction of a box: the ends, plus the interior points where
/// the boundary distance switches faces (`extra` when it comes from the
/// other axis).
fn box_cuts(lo: f64, hi: f64, extra: Option<f64>, layers: usize) -> Vec<(f64, usize)> {
    let mut inner = vec![0.5 * (lo + hi)];
    if let Some(d) = extra {
        inner.extend([lo + d, hi - d]);
    }
    inner.retain(|&c| c > lo && c < hi);
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (hi - lo));
    let mut cuts = vec![(lo, layers)];
    cuts.extend(inner.into_iter().map(|c| (c, 1)));
    cuts.push((hi, layers));
    cuts
}

fn context<'a>(f: &'a TestFunction, kernel: &'a Kernel, p: f64, q: f64, cfg: &'a QuadratureConfig) -> Ctx<'a> {
    Ctx { f, kernel, q, power: p / q, cfg, open_ends: f.blows_up_at_boundary(), track: Tracker::default() }
}

/// Ladder on the interval `(a, b)`.
pub(crate) fn interval_ladder(
    f: &TestFunction,
    kernel: &Kernel,
    p: f64,
    q: f64,
    a: f64,
    b: f64,
    thetas: &[f64],
    cfg: &QuadratureConfig,
) -> RawLadder {
    let ctx = context(f, kernel, p, q, cfg);
    let m = thetas.len() + 1;
    let mut kinks: Vec<f64> = f.breakpoints().into_iter().filter(|&c| c > a && c < b).collect();
    kinks.sort_by(f64::total_cmp);
    let mut cuts = vec![(a, cfg.boundary_layers)];
    cuts.extend(kinks.iter().map(|&c| (c, cfg.boundary_layers / 2)));
    cuts.push((b, cfg.boundary_layers));
    let mut panels = Vec::new();
    outer_panels(&cuts, ctx.open_ends, &mut panels);
    let rule = GaussLegendre::cached(cfg.order);
    let s = integrate_nodes(&panels, rule, 2, 2, m, |x| {
        let mut out = vec![0.0; 2 * m];
        inner_interval(&ctx, a, b, x, thetas, &kinks, &mut out);
        out
    });
    RawLadder::from_sum(&s, m, &ctx.track)
}

fn inner_box(ctx: &Ctx, lo: [f64; 2], hi: [f64; 2], x: [f64; 2], thetas: &[f64], out: &mut [f64]) {
    let cfg = ctx.cfg;
    let m = thetas.len() + 1;
    let delta = (x[0] - lo[0]).min(hi[0] - x[0]).min(x[1] - lo[1]).min(hi[1] - x[1]);
    let fx = ctx.f.eval(&x);
    let mut add = vec![0.0; m];
    let mut rep = vec![0.0; m];
    let ray = |omega: f64, weight: f64, k: usize, r0: f64, r1: f64, edge: bool, add: &mut [f64], rep: &mut [f64]| {
        let (c, s) = (omega.cos(), omega.sin());
        let (body, tail) =
            radial_piece(ctx, r0, r1, edge, &[], |r| ctx.radial(fx, ctx.f.eval(&[x[0] + r * c, x[1] + r * s]), r, 2));
        add[k] += weight * (body + tail);
        rep[k] += weight * body;
    };
    // nested balls: equally spaced directions
    if m > 1 {
        let w = TAU / cfg.angles as f64;
        for j in 0..cfg.angles {
            let omega = w * (j as f64 + 0.5);
            let mut r0 = 0.0;
            for k in 0..m - 1 {
                let r1 = thetas[k] * delta;
                if r1 > r0 {
                    ray(omega, w, k, r0, r1, false, &mut add, &mut rep);
                }
                r0 = r0.max(r1);
            }
        }
    }
    // outside the largest ball: one direction per boundary point
    let r_in = if m > 1 { thetas[m - 2] * delta } else { 0.0 };
    sweep_rectangle(lo, hi, x, cfg.sector_order, |omega, wt, rho_max| {
        if rho_max > r_in {
            ray(omega, wt, m - 1, r_in, rho_max, true, &mut add, &mut rep);
        }
    });
    finish(ctx, &add, &rep, out);
}

/// Ladder on the planar box `[lo, hi]`.
pub(crate) fn box_ladder(
    f: &TestFunction,
    kernel: &Kernel,
    p: f64,
    q: f64,
    lo: [f64; 2],
    hi: [f64; 2],
    thetas: &[f64],
    cfg: &QuadratureConfig,
) -> RawLadder {
    let ctx = context(f, kernel, p, q, cfg);
    let m = thetas.len() + 1;
    let rule = GaussLegendre::cached(cfg.order);
    let mut p1 = Vec::new();
    outer_panels(&box_cuts(lo[0], hi[0], None, cfg.boundary_layers), ctx.open_ends, &mut p1);
    let s = integrate_nodes(&p1, rule, 2, 2, m, |x1| {
        let d1 = (x1 - lo[0]).min(hi[0] - x1);
        let mut p2 = Vec::new();
        outer_panels(&box_cuts(lo[1], hi[1], Some(d1), cfg.boundary_layers), ctx.open_ends, &mut p2);
        let inner = ladder_integrate(&p2, rule, 2, 2, m, |x2, out| inner_box(&ctx, lo, hi, [x1, x2], thetas, out));
        ctx.track.note(inner.status);
        let mut g = vec![0.0; 2 * m];
        for k in 0..m {
            g[k] = inner.with_tail(k);
            g[m + k] = inner.body[m + k];
        }
        g
    });
    RawLadder::from_sum(&s, m, &ctx.track)
}
