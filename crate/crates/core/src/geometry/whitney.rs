use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::domain::{AaBox, Domain};
use crate::error::{invalid, Result};

/// Closed dyadic cube of side `base·2^{-level}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: i32,
    pub index: Vec<i64>,
    pub side: f64,
    pub lo: Vec<f64>,
}

impl DyadicCube {
    pub fn new(level: i32, index: Vec<i64>, base: f64, origin: &[f64]) -> Self {
        let side = base * 0.5f64.powi(level);
        let lo = index.iter().zip(origin).map(|(&j, o)| o + j as f64 * side).collect();
        Self { level, index, side, lo }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().map(|a| a + 0.5 * self.side).collect()
    }

    pub fn extent(&self) -> AaBox {
        AaBox::cube(&self.lo, self.side)
    }

    pub fn children(&self, base: f64, origin: &[f64]) -> Vec<DyadicCube> {
        let d = self.dim();
        (0..1usize << d)
            .map(|m| {
                let idx = (0..d).map(|i| 2 * self.index[i] + ((m >> i) & 1) as i64).collect();
                DyadicCube::new(self.level + 1, idx, base, origin)
            })
            .collect()
    }
}

/// `D(Q,S) = l(Q) + d(Q,S) + l(S)`.
pub fn long_distance(q: &DyadicCube, s: &DyadicCube) -> f64 {
    let gap2: f64 =
        q.lo.iter()
            .zip(&s.lo)
            .map(|(&a, &b)| {
                let g = (b - (a + q.side)).max(a - (b + s.side)).max(0.0);
                g * g
            })
            .sum();
    q.side + gap2.sqrt() + s.side
}

/// Uniform bucket grid over cube extents.
#[derive(Debug, Clone)]
struct SpatialIndex {
    h: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl SpatialIndex {
    fn build(cubes: &[DyadicCube]) -> Self {
        let mut sides: Vec<f64> = cubes.iter().map(|c| c.side).collect();
        sides.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let h = if sides.is_empty() { 1.0 } else { 2.0 * sides[sides.len() / 2] };
        let probe = SpatialIndex { h, buckets: HashMap::new() };
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, c) in cubes.iter().enumerate() {
            probe.for_cells(&c.extent(), |key| buckets.entry(key).or_default().push(i));
        }
        SpatialIndex { h, buckets }
    }

    fn cell_range(&self, b: &AaBox) -> Vec<(i64, i64)> {
        (0..b.dim())
            .map(|i| {
                let eps = 1e-9 * self.h;
                (((b.lo[i] - eps) / self.h).floor() as i64, ((b.hi[i] + eps) / self.h).floor() as i64)
            })
            .collect()
    }

    fn for_cells(&self, b: &AaBox, mut f: impl FnMut(Vec<i64>)) {
        let ranges = self.cell_range(b);
        let mut key: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            f(key.clone());
            let mut i = 0;
            loop {
                if i == key.len() {
                    return;
                }
                if key[i] < ranges[i].1 {
                    key[i] += 1;
                    break;
                }
                key[i] = ranges[i].0;
                i += 1;
            }
        }
    }

    /// Ids of cubes whose extent may meet `b` (superset, sorted, unique).
    fn query(&self, b: &AaBox, n: usize) -> Vec<usize> {
        let ranges = self.cell_range(b);
        let cells: f64 = ranges.iter().map(|r| (r.1 - r.0 + 1) as f64).product();
        let mut out: Vec<usize> = if cells > self.buckets.len() as f64 {
            (0..n).collect()
        } else {
            let mut v = Vec::new();
            self.for_cells(b, |key| {
                if let Some(ids) = self.buckets.get(&key) {
                    v.extend_from_slice(ids);
                }
            });
            v
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Smallest acceptance factor for which the construction below provably
/// satisfies all four axioms: 4.5 when the boundary is made of full
/// axis-aligned faces, `4.5·√d` otherwise.
pub fn default_whitney_constant(domain: &Domain) -> f64 {
    if domain.axis_aligned_boundary() {
        4.5
    } else {
        4.5 * (domain.dim() as f64).sqrt()
    }
}

/// Default shadow radius `3√d/ε_floor`.
pub fn default_rho(d: usize, eps_floor: f64) -> f64 {
    3.0 * (d as f64).sqrt() / eps_floor
}

pub const DEFAULT_EPS_FLOOR: f64 = 0.05;

/// Whitney decomposition with neighbor graph.
#[derive(Debug, Clone)]
pub struct WhitneyDecomposition {
    pub domain: Domain,
    pub cubes: Vec<DyadicCube>,
    pub neighbors: Vec<Vec<usize>>,
    /// Whitney constant `C_W` of the fourth axiom.
    pub c_w: f64,
    pub max_depth: i32,
    /// Set when cubes finer than `max_depth` near the boundary were dropped.
    pub truncated: bool,
    /// Shadow radius in use.
    pub rho: f64,
    /// Cubes whose `3Q` is not fully tiled by retained cubes.
    pub frontier: Vec<bool>,
    pub window: Option<AaBox>,
    pub base: f64,
    pub origin: Vec<f64>,
    index: SpatialIndex,
    lookup: HashMap<(i32, Vec<i64>), usize>,
}

impl WhitneyDecomposition {
    /// Assembles a decomposition from given cubes (used for hand-built
    /// families in verification tests).
    pub fn from_cubes(domain: Domain, cubes: Vec<DyadicCube>, c_w: f64, max_depth: i32) -> Self {
        let d = domain.dim();
        let base = 1.0;
        let origin = vec![0.0; d];
        Self::assemble(domain, cubes, c_w, max_depth, false, None, base, origin)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        domain: Domain,
        cubes: Vec<DyadicCube>,
        c_w: f64,
        max_depth: i32,
        truncated: bool,
        window: Option<AaBox>,
        base: f64,
        origin: Vec<f64>,
    ) -> Self {
        let index = SpatialIndex::build(&cubes);
        let n = cubes.len();
        let neighbors: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let e = cubes[i].extent();
                let tol = 1e-12 * cubes[i].side;
                index.query(&e, n).into_iter().filter(|&j| j != i && e.dist_box(&cubes[j].extent()) <= tol).collect()
            })
            .collect();
        let frontier = (0..n)
            .map(|i| {
                let three = cubes[i].extent().scaled(3.0);
                let covered: f64 =
                    index.query(&three, n).into_iter().map(|j| three.overlap_volume(&cubes[j].extent())).sum();
                covered < (1.0 - 1e-9) * three.volume()
            })
            .collect();
        let lookup = cubes.iter().enumerate().map(|(i, c)| ((c.level, c.index.clone()), i)).collect();
        let rho = default_rho(domain.dim(), DEFAULT_EPS_FLOOR);
        Self { domain, cubes, neighbors, c_w, max_depth, truncated, rho, frontier, window, base, origin, index, lookup }
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn find(&self, level: i32, index: &[i64]) -> Option<usize> {
        self.lookup.get(&(level, index.to_vec())).copied()
    }

    /// Ids of cubes whose extent may meet the box (superset).
    pub fn candidates(&self, b: &AaBox) -> Vec<usize> {
        self.index.query(b, self.cubes.len())
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    /// Id of a largest cube, ties broken by distance to the centroid of all
    /// cube centers.
    pub fn central_cube(&self) -> usize {
        let d = self.dim();
        let n = self.len() as f64;
        let mut mean = vec![0.0; d];
        for c in &self.cubes {
            for (m, x) in mean.iter_mut().zip(c.center()) {
                *m += x / n;
            }
        }
        let top = self.cubes.iter().map(|c| c.level).min().unwrap_or(0);
        (0..self.len())
            .filter(|&i| self.cubes[i].level == top)
            .min_by(|&a, &b| {
                let da = dist(&self.cubes[a].center(), &mean);
                let db = dist(&self.cubes[b].center(), &mean);
                da.partial_cmp(&db).unwrap()
            })
            .unwrap_or(0)
    }

    /// JSON lines export: one object per cube.
    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.cubes.iter().enumerate() {
            let v = serde_json::json!({
                "id": i,
                "level": c.level,
                "index": c.index,
                "side": c.side,
                "center": c.center(),
                "neighbors": self.neighbors[i],
                "frontier": self.frontier[i],
            });
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Standard top-down dyadic Whitney construction: a cube is kept when it lies
/// in Ω with `d(Q, ∂Ω) ≥ C_W·l(Q)`, split otherwise, and dropped at
/// `max_depth`. Unbounded domains need a window; its unit cells are the roots.
pub fn whitney_decompose(domain: &Domain, max_depth: i32, window: Option<&AaBox>) -> Result<WhitneyDecomposition> {
    whitney_decompose_with(domain, max_depth, window, default_whitney_constant(domain))
}

pub fn whitney_decompose_with(
    domain: &Domain,
    max_depth: i32,
    window: Option<&AaBox>,
    c_w: f64,
) -> Result<WhitneyDecomposition> {
    if max_depth < 1 {
        return Err(invalid("max_depth must be at least 1"));
    }
    if max_depth > 24 {
        return Err(invalid("max_depth above 24 is not supported"));
    }
    let d = domain.dim();
    let (base, origin, roots) = match (domain.bounding_box(), window) {
        (Some(bb), _) => {
            let base = bb.lo.iter().zip(&bb.hi).map(|(a, b)| b - a).fold(0.0, f64::max);
            let counts: Vec<i64> =
                (0..d).map(|i| (((bb.hi[i] - bb.lo[i]) / base) - 1e-12).ceil().max(1.0) as i64).collect();
            let roots = grid_indices(&vec![0; d], &counts.iter().map(|c| c - 1).collect::<Vec<_>>());
            (base, bb.lo.clone(), roots)
        }
        (None, Some(w)) => {
            if w.dim() != d {
                return Err(invalid("window dimension does not match the domain"));
            }
            let lo: Vec<i64> = w.lo.iter().map(|a| a.floor() as i64).collect();
            let hi: Vec<i64> = w.hi.iter().map(|b| b.ceil() as i64 - 1).collect();
            (1.0, vec![0.0; d], grid_indices(&lo, &hi))
        }
        (None, None) => return Err(invalid("an unbounded domain needs a window")),
    };
    let mut stack: Vec<DyadicCube> = roots
        .into_iter()
        .map(|idx| DyadicCube::new(0, idx, base, &origin))
        .filter(|c| window.is_none_or(|w| c.extent().overlap_volume(w) > 0.0))
        .collect();
    if stack.iter().all(|c| !domain.box_meets(&c.extent())) {
        return Err(invalid("window does not meet the domain"));
    }
    let mut kept = Vec::new();
    let mut truncated = false;
    while let Some(c) = stack.pop() {
        let e = c.extent();
        if !domain.box_meets(&e) {
            continue;
        }
        if domain.contains(&c.center()) {
            let dq = domain.box_boundary_distance(&e);
            if dq > 0.0 && dq >= c_w * c.side * (1.0 - 1e-12) {
                kept.push(c);
                continue;
            }
        }
        if c.level >= max_depth {
            truncated = true;
            continue;
        }
        stack.extend(c.children(base, &origin));
    }
    if kept.is_empty() {
        return Err(invalid("no Whitney cube fits at this depth"));
    }
    kept.sort_by(|a, b| (a.level, &a.index).cmp(&(b.level, &b.index)));
    Ok(WhitneyDecomposition::assemble(domain.clone(), kept, c_w, max_depth, truncated, window.cloned(), base, origin))
}

fn grid_indices(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut key = lo.to_vec();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return out;
    }
    loop {
        out.push(key.clone());
        let mut i = 0;
        loop {
            if i == key.len() {
                return out;
            }
            if key[i] < hi[i] {
                key[i] += 1;
                break;
            }
            key[i] = lo[i];
            i += 1;
        }
    }
}

/// One axiom violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: u8,
    pub cubes: (usize, usize),
    /// Size of the violation (overlap volume, side ratio or distance ratio).
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    /// Violations of axioms 1-4.
    pub counts: [usize; 4],
    /// Worst offenders, at most five per axiom.
    pub worst: Vec<Violation>,
    pub axiom4_checked: usize,
}

impl ViolationReport {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Exhaustive check of the four Whitney axioms.
pub fn verify_whitney(w: &WhitneyDecomposition) -> ViolationReport {
    let n = w.len();
    let mut found: [Vec<Violation>; 4] = Default::default();
    for i in 0..n {
        let qi = &w.cubes[i];
        let ei = qi.extent();
        for j in w.candidates(&ei) {
            if j <= i {
                continue;
            }
            let qj = &w.cubes[j];
            let ej = qj.extent();
            let ov = ei.overlap_volume(&ej);
            let small = qi.side.min(qj.side);
            if ov > 1e-9 * small.powi(w.dim() as i32) {
                found[0].push(Violation { axiom: 1, cubes: (i, j), magnitude: ov });
            }
            if ei.dist_box(&ej) <= 1e-12 * small {
                let ratio = qi.side.max(qj.side) / small;
                if ratio > 2.0 * (1.0 + 1e-12) {
                    found[1].push(Violation { axiom: 2, cubes: (i, j), magnitude: ratio });
                }
            }
        }
        // axiom 3 with S = cube i
        let five = ei.scaled(5.0);
        for j in w.candidates(&five) {
            let qj = &w.cubes[j];
            if five.contains_box(&qj.extent(), 1e-12 * qi.side) && qi.side > 2.0 * qj.side * (1.0 + 1e-12) {
                found[2].push(Violation { axiom: 3, cubes: (j, i), magnitude: qi.side / qj.side });
            }
        }
    }
    let mut checked = 0;
    for i in 0..n {
        if w.frontier[i] && w.truncated {
            continue;
        }
        checked += 1;
        let q = &w.cubes[i];
        let dq = w.domain.box_boundary_distance(&q.extent());
        let lo = w.c_w * q.side * (1.0 - 1e-12);
        let hi = 4.0 * w.c_w * q.side * (1.0 + 1e-12);
        if dq < lo || dq > hi {
            found[3].push(Violation { axiom: 4, cubes: (i, i), magnitude: dq / (w.c_w * q.side) });
        }
    }
    let counts = [found[0].len(), found[1].len(), found[2].len(), found[3].len()];
    let mut worst = Vec::new();
    for mut v in found {
        v.sort_by(|a, b| b.magnitude.partial_cmp(&a.magnitude).unwrap());
        worst.extend(v.into_iter().take(5));
    }
    ViolationReport { counts, worst, axiom4_checked: checked }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_distance_examples() {
        let a = DyadicCube::new(0, vec![0, 0], 1.0, &[0.0, 0.0]);
        assert_eq!(long_distance(&a, &a), 2.0);
        let b = DyadicCube::new(0, vec![4, 0], 1.0, &[0.0, 0.0]);
        assert_eq!(long_distance(&a, &b), 5.0);
        let c = DyadicCube::new(1, vec![2, 0], 1.0, &[0.0, 0.0]);
        assert_eq!(long_distance(&a, &c), 1.5);
    }

    #[test]
    fn unit_square_decomposition_is_valid() {
        let w = whitney_decompose(&Domain::unit_square(), 7, None).unwrap();
        assert!(w.truncated);
        let r = verify_whitney(&w);
        assert_eq!(r.total(), 0, "{r:?}");
        assert!(w.frontier.iter().any(|&f| f));
        assert!(w.frontier.iter().any(|&f| !f));
    }

    #[test]
    fn strip_needs_window() {
        let s = Domain::strip(1, 1).unwrap();
        assert!(whitney_decompose(&s, 5, None).is_err());
        let win = AaBox::new(vec![-2.0, 0.0], vec![2.0, 1.0]).unwrap();
        let w = whitney_decompose(&s, 6, Some(&win)).unwrap();
        assert_eq!(verify_whitney(&w).total(), 0);
        let far = AaBox::new(vec![-2.0, 3.0], vec![2.0, 4.0]).unwrap();
        assert!(whitney_decompose(&s, 6, Some(&far)).is_err());
    }
}
