//! Integration of nested-region values with tails that stay monotone in the
//! region index.
//!
//! An integrand returns one value per region for `groups` independent groups
//! laid out as `v[g * m + k]`; inside a group the values are nondecreasing in
//! `k`. Tails are built from the per-region increments, so the integrated
//! values inherit the ordering exactly.

use std::sync::atomic::{AtomicU8, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::quad::{GaussLegendre, Panel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub(crate) enum TailStatus {
    #[default]
    Ok,
    /// The last ratio was not below one but the terms are not growing.
    Unreliable,
    /// The last terms are nondecreasing.
    Diverging,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct TailEst {
    pub value: f64,
    pub status: TailStatus,
}

/// Geometric tail of a nonnegative layer sequence.
pub(crate) fn estimate_tail(seq: &[f64]) -> TailEst {
    let n = seq.len();
    if n == 0 || seq[n - 1] <= 0.0 {
        return TailEst::default();
    }
    let last = seq[n - 1];
    // below the roundoff of the leading layers the ratio carries no information
    if last <= 1e-12 * seq.iter().fold(0.0f64, |a, &b| a.max(b)) {
        return TailEst { value: last, status: TailStatus::Ok };
    }
    if n == 1 {
        return TailEst { value: last, status: TailStatus::Unreliable };
    }
    let prev = seq[n - 2];
    if prev > 0.0 && last < prev {
        let r = last / prev;
        return TailEst { value: last * r / (1.0 - r), status: TailStatus::Ok };
    }
    let k = n.min(4);
    if seq[n - k..].windows(2).all(|w| w[1] >= w[0]) && k >= 3 {
        TailEst { value: f64::INFINITY, status: TailStatus::Diverging }
    } else {
        TailEst { value: last, status: TailStatus::Unreliable }
    }
}

/// Integrated region values: panel sums plus cumulative tails.
#[derive(Debug, Clone)]
pub(crate) struct LadderSum {
    pub body: Vec<f64>,
    pub tail: Vec<f64>,
    pub status: TailStatus,
}

impl LadderSum {
    pub fn with_tail(&self, i: usize) -> f64 {
        self.body[i] + self.tail[i]
    }
}

/// Integrates a region-valued function over panels. `nseq` graded layer
/// sequences receive tails; `m` is the region count per group.
pub(crate) fn ladder_integrate(
    panels: &[Panel],
    rule: &GaussLegendre,
    nseq: usize,
    groups: usize,
    m: usize,
    mut f: impl FnMut(f64, &mut [f64]),
) -> LadderSum {
    let len = groups * m;
    let mut body = vec![0.0; len];
    // layer contributions: seq -> layer -> entry
    let mut layers: Vec<Vec<Vec<f64>>> = vec![Vec::new(); nseq];
    let mut buf = vec![0.0; len];
    let mut panel = vec![0.0; len];
    for p in panels {
        panel.iter_mut().for_each(|v| *v = 0.0);
        rule.map(p.lo, p.hi, |x, w| {
            buf.iter_mut().for_each(|v| *v = 0.0);
            f(x, &mut buf);
            for (acc, v) in panel.iter_mut().zip(&buf) {
                *acc += w * v;
            }
        });
        for (b, v) in body.iter_mut().zip(&panel) {
            *b += v;
        }
        if let Some((s, j)) = p.layer {
            let seq = &mut layers[s];
            if seq.len() <= j {
                seq.resize(j + 1, vec![0.0; len]);
            }
            for (acc, v) in seq[j].iter_mut().zip(&panel) {
                *acc += v;
            }
        }
    }
    let mut tail = vec![0.0; len];
    let mut status = TailStatus::Ok;
    for seq in &layers {
        for g in 0..groups {
            let mut cum = 0.0;
            for k in 0..m {
                let i = g * m + k;
                let inc: Vec<f64> = seq
                    .iter()
                    .map(|layer| if k == 0 { layer[i] } else { (layer[i] - layer[i - 1]).max(0.0) })
                    .collect();
                let t = estimate_tail(&inc);
                status = status.max(t.status);
                cum += t.value;
                tail[i] += cum;
            }
        }
    }
    LadderSum { body, tail, status }
}

/// Evaluates region vectors at all nodes in parallel, then integrates them in
/// panel order so the result does not depend on scheduling.
pub(crate) fn integrate_nodes(
    panels: &[Panel],
    rule: &GaussLegendre,
    nseq: usize,
    groups: usize,
    m: usize,
    eval: impl Fn(f64) -> Vec<f64> + Sync,
) -> LadderSum {
    let mut nodes = Vec::with_capacity(panels.len() * rule.order());
    for p in panels {
        rule.map(p.lo, p.hi, |x, _| nodes.push(x));
    }
    let values: Vec<Vec<f64>> = nodes.par_iter().map(|&x| eval(x)).collect();
    let mut it = values.into_iter();
    ladder_integrate(panels, rule, nseq, groups, m, |_, out| {
        out.copy_from_slice(&it.next().expect("one value per node"));
    })
}

/// Evaluation count and worst tail status shared across worker threads.
#[derive(Debug, Default)]
pub(crate) struct Tracker {
    evals: AtomicUsize,
    status: AtomicU8,
}

impl Tracker {
    pub fn count(&self, n: usize) {
        self.evals.fetch_add(n, Ordering::Relaxed);
    }

    pub fn note(&self, s: TailStatus) {
        self.status.fetch_max(s as u8, Ordering::Relaxed);
    }

    pub fn evaluations(&self) -> usize {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn status(&self) -> TailStatus {
        match self.status.load(Ordering::Relaxed) {
            0 => TailStatus::Ok,
            1 => TailStatus::Unreliable,
            _ => TailStatus::Diverging,
        }
    }
}

/// p-th power integrals per region (`thetas` in order, then the full region).
#[derive(Debug, Clone)]
pub(crate) struct RawLadder {
    pub with_tail: Vec<f64>,
    pub without_tail: Vec<f64>,
    pub evaluations: usize,
    pub status: TailStatus,
}

impl RawLadder {
    /// Reads the two groups of an outer sum.
    pub fn from_sum(s: &LadderSum, m: usize, tracker: &Tracker) -> Self {
        tracker.note(s.status);
        Self {
            with_tail: (0..m).map(|k| s.with_tail(k)).collect(),
            without_tail: (0..m).map(|k| s.body[m + k]).collect(),
            evaluations: tracker.evaluations(),
            status: tracker.status(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::layers_toward_lo;

    #[test]
    fn tails_are_monotone_in_the_region() {
        let mut panels = Vec::new();
        layers_toward_lo(0.0, 1.0, 20, 0, &mut panels);
        let s = ladder_integrate(&panels, GaussLegendre::cached(8), 1, 1, 3, |x, v| {
            v[0] = x.powf(-0.5);
            v[1] = v[0] + x.powf(-0.7);
            v[2] = v[1] + 0.1 * x.powf(-0.2);
        });
        assert!(s.with_tail(0) <= s.with_tail(1) && s.with_tail(1) <= s.with_tail(2));
        assert!((s.with_tail(0) - 2.0).abs() < 1e-9);
        assert!((s.with_tail(1) - 2.0 - 1.0 / 0.3).abs() < 1e-7);
    }

    #[test]
    fn growing_layers_are_flagged() {
        let t = estimate_tail(&[1.0, 1.0, 1.1, 1.2]);
        assert_eq!(t.status, TailStatus::Diverging);
        assert_eq!(estimate_tail(&[0.0, 0.0]).value, 0.0);
    }
}
