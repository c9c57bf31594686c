//! Quadrature building blocks: Gauss-Legendre rules, graded panels and
//! geometric tail estimates for dyadic layer sums.

use std::sync::OnceLock;

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the n-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Cached rule for small orders.
    pub fn cached(n: usize) -> &'static GaussLegendre {
        static CACHE: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| (1..=64).map(GaussLegendre::new).collect());
        assert!((1..=64).contains(&n), "cached Gauss order must lie in 1..=64");
        &cache[n - 1]
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Calls `visit(x, w)` for each mapped node on [a, b].
    pub fn map(&self, a: f64, b: f64, mut visit: impl FnMut(f64, f64)) {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            visit(c + h * x, h * w);
        }
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut s = 0.0;
        self.map(a, b, |x, w| s += w * f(x));
        s
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Tail of a dyadic layer series estimated from its last two terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tail {
    /// Estimated remainder `last * r / (1 - r)`; infinite when `r >= 1`.
    pub value: f64,
    /// Ratio of the last two layer contributions.
    pub ratio: f64,
}

impl Tail {
    pub fn diverging(&self) -> bool {
        !self.value.is_finite()
    }
}

/// Geometric tail from the last two layer contributions of a nonnegative series.
pub fn geometric_tail(prev: f64, last: f64) -> Tail {
    if last <= 0.0 {
        return Tail { value: 0.0, ratio: 0.0 };
    }
    if prev <= 0.0 {
        return Tail { value: f64::INFINITY, ratio: f64::INFINITY };
    }
    let r = last / prev;
    if r >= 1.0 {
        Tail { value: f64::INFINITY, ratio: r }
    } else {
        Tail { value: last * r / (1.0 - r), ratio: r }
    }
}

/// Same as [`geometric_tail`] but with the ratio clamped below one, so the
/// estimate stays finite. Used where a divergent tail is reported by a flag.
pub fn clamped_tail(prev: f64, last: f64, max_ratio: f64) -> Tail {
    let t = geometric_tail(prev, last);
    if t.value.is_finite() || last <= 0.0 {
        t
    } else {
        let r = max_ratio;
        Tail { value: last * r / (1.0 - r), ratio: t.ratio }
    }
}

/// A quadrature panel, optionally part of a graded layer sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub lo: f64,
    pub hi: f64,
    /// `(sequence, layer)` when the panel belongs to a graded end; layer
    /// indices grow toward the end.
    pub layer: Option<(usize, usize)>,
}

/// Appends `layers` dyadic panels on `[lo, hi]` shrinking toward `lo`.
pub fn layers_toward_lo(lo: f64, hi: f64, layers: usize, seq: usize, out: &mut Vec<Panel>) {
    let w = hi - lo;
    for j in 0..layers {
        let a = lo + w * 0.5f64.powi(j as i32 + 1);
        let b = lo + w * 0.5f64.powi(j as i32);
        out.push(Panel { lo: a, hi: b, layer: Some((seq, j)) });
    }
}

/// Appends `layers` dyadic panels on `[lo, hi]` shrinking toward `hi`.
pub fn layers_toward_hi(lo: f64, hi: f64, layers: usize, seq: usize, out: &mut Vec<Panel>) {
    let w = hi - lo;
    for j in 0..layers {
        let a = hi - w * 0.5f64.powi(j as i32);
        let b = hi - w * 0.5f64.powi(j as i32 + 1);
        out.push(Panel { lo: a, hi: b, layer: Some((seq, j)) });
    }
}

/// Appends panels `[lo 2^k, lo 2^{k+1}]` covering `[lo, hi]`, for integrands
/// whose scale is the distance to the origin. Requires `lo > 0`.
pub fn geometric_panels(lo: f64, hi: f64, out: &mut Vec<Panel>) {
    let mut a = lo;
    while a < hi {
        let b = (2.0 * a).min(hi);
        // avoid a sliver panel at the end
        let b = if hi - b < 0.25 * (b - a) { hi } else { b };
        out.push(Panel { lo: a, hi: b, layer: None });
        a = b;
    }
}

/// Integrates over graded layers and returns `(sum, per-layer sums)`.
pub fn layer_sums(
    panels: &[Panel],
    rule: &GaussLegendre,
    sequences: usize,
    mut f: impl FnMut(f64) -> f64,
) -> (f64, Vec<Vec<f64>>) {
    let mut seqs: Vec<Vec<f64>> = vec![Vec::new(); sequences];
    let mut total = 0.0;
    for p in panels {
        let v = rule.integrate(p.lo, p.hi, &mut f);
        total += v;
        if let Some((s, j)) = p.layer {
            let seq = &mut seqs[s];
            if seq.len() <= j {
                seq.resize(j + 1, 0.0);
            }
            seq[j] += v;
        }
    }
    (total, seqs)
}

/// Tail estimate from the last two entries of a layer sequence.
pub fn sequence_tail(seq: &[f64]) -> Tail {
    match seq.len() {
        0 => Tail::default(),
        1 => geometric_tail(0.0, seq[0]),
        n => geometric_tail(seq[n - 2], seq[n - 1]),
    }
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// Integrates a smooth function on `[a, b]` with `panels` equal Gauss panels.
pub fn gauss_panels(a: f64, b: f64, panels: usize, order: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = GaussLegendre::cached(order);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let lo = a + h * k as f64;
        s += rule.integrate(lo, lo + h, &mut f);
    }
    s
}

/// Integrates `f` on `[lo, hi]` (`0 <= lo < hi`) when `f` varies on the scale
/// `scale` near `lo`: uniform panels of width `scale` first, then doubling.
pub fn scaled_panels(lo: f64, hi: f64, scale: f64, order: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = GaussLegendre::cached(order);
    let mut a = lo;
    let mut w = scale.max((hi - lo) * 1e-14);
    let mut s = 0.0;
    while a < hi {
        let mut b = (a + w).min(hi);
        if hi - b < 0.25 * w {
            b = hi;
        }
        s += rule.integrate(a, b, &mut f);
        a = b;
        w *= 2.0;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        for n in 1..=20 {
            let g = GaussLegendre::new(n);
            for k in 0..(2 * n) {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let v = g.integrate(-1.0, 1.0, |x| x.powi(k as i32));
                assert!((v - exact).abs() < 1e-13, "n={n} k={k} v={v}");
            }
        }
    }

    #[test]
    fn weights_sum_to_two() {
        let g = GaussLegendre::new(37);
        let s: f64 = g.weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn geometric_tail_is_exact_for_geometric_series() {
        let t = geometric_tail(0.5, 0.25);
        assert!((t.value - 0.25).abs() < 1e-15);
        assert!(geometric_tail(1.0, 1.0).diverging());
        assert_eq!(geometric_tail(1.0, 0.0).value, 0.0);
    }

    #[test]
    fn graded_layers_plus_tail_recover_singular_integral() {
        // \int_0^1 x^{-1/2} dx = 2
        let mut panels = Vec::new();
        layers_toward_lo(0.0, 1.0, 30, 0, &mut panels);
        let (s, seqs) = layer_sums(&panels, GaussLegendre::cached(12), 1, |x| x.powf(-0.5));
        let t = sequence_tail(&seqs[0]);
        assert!((s + t.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_panels_cover_interval() {
        let mut p = Vec::new();
        geometric_panels(1e-6, 3.0, &mut p);
        assert_eq!(p.first().unwrap().lo, 1e-6);
        assert_eq!(p.last().unwrap().hi, 3.0);
        for w in p.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
    }

    #[test]
    fn scaled_panels_handle_peaked_integrand() {
        // \int_0^10 t/(t^2+z^2) dz = atan(10/t)
        let t = 1e-5;
        let v = scaled_panels(0.0, 10.0, t, 10, |z| t / (t * t + z * z));
        assert!((v - (10.0f64 / t).atan()).abs() < 1e-12);
    }
}
