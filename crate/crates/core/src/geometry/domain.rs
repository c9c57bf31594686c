use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Closed axis-aligned box; bounds may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AaBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AaBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(invalid("box bounds must be nonempty and of equal length"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a <= b)) {
            return Err(invalid("box bounds must satisfy lo <= hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(lo: &[f64], side: f64) -> Self {
        Self { lo: lo.to_vec(), hi: lo.iter().map(|a| a + side).collect() }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    /// Euclidean distance from a point (0 inside).
    pub fn dist_point(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let g = (self.lo[i] - x[i]).max(x[i] - self.hi[i]).max(0.0);
            s += g * g;
        }
        s.sqrt()
    }

    /// Largest distance from a point to a point of the box.
    pub fn farthest_point_dist(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let g = (x[i] - self.lo[i]).abs().max((self.hi[i] - x[i]).abs());
            s += g * g;
        }
        s.sqrt()
    }

    /// Euclidean set distance between boxes.
    pub fn dist_box(&self, other: &AaBox) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let g = gap(self.lo[i], self.hi[i], other.lo[i], other.hi[i]);
            s += g * g;
        }
        s.sqrt()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i])
    }

    /// Closed containment with a relative tolerance.
    pub fn contains_box(&self, other: &AaBox, tol: f64) -> bool {
        (0..self.dim()).all(|i| other.lo[i] >= self.lo[i] - tol && other.hi[i] <= self.hi[i] + tol)
    }

    /// Volume of the intersection.
    pub fn overlap_volume(&self, other: &AaBox) -> f64 {
        let mut v = 1.0;
        for i in 0..self.dim() {
            let w = self.hi[i].min(other.hi[i]) - self.lo[i].max(other.lo[i]);
            if w <= 0.0 {
                return 0.0;
            }
            v *= w;
        }
        v
    }

    /// Box scaled by `factor` about its center.
    pub fn scaled(&self, factor: f64) -> AaBox {
        let c = self.center();
        let lo = (0..self.dim()).map(|i| c[i] - factor * 0.5 * (self.hi[i] - self.lo[i])).collect();
        let hi = (0..self.dim()).map(|i| c[i] + factor * 0.5 * (self.hi[i] - self.lo[i])).collect();
        AaBox { lo, hi }
    }

    pub fn diameter(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }
}

#[inline]
fn gap(alo: f64, ahi: f64, blo: f64, bhi: f64) -> f64 {
    let g = (blo - ahi).max(alo - bhi);
    if g > 0.0 {
        g
    } else {
        0.0
    }
}

/// A domain Ω ⊂ R^d.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Interval {
        a: f64,
        b: f64,
    },
    Box(AaBox),
    /// R^k × (0,1)^l; the unbounded axes come first.
    Strip {
        k: usize,
        l: usize,
    },
    /// Interior of a finite union of closed boxes.
    Union(BoxUnion),
}

/// Finite union of boxes with precomputed boundary faces.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxUnion {
    pub parts: Vec<AaBox>,
    faces: Vec<AaBox>,
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(invalid(format!("interval needs finite a < b, got ({a}, {b})")));
        }
        Ok(Domain::Interval { a, b })
    }

    pub fn unit_interval() -> Self {
        Domain::Interval { a: 0.0, b: 1.0 }
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let b = AaBox::new(lo, hi)?;
        if b.lo.iter().zip(&b.hi).any(|(a, c)| !(a < c) || !a.is_finite() || !c.is_finite()) {
            return Err(invalid("box domain needs finite nondegenerate sides"));
        }
        Ok(Domain::Box(b))
    }

    pub fn unit_square() -> Self {
        Domain::Box(AaBox { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] })
    }

    pub fn strip(k: usize, l: usize) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(invalid("strip needs at least one unbounded and one bounded axis"));
        }
        Ok(Domain::Strip { k, l })
    }

    /// `[0,2]^2` minus `(1,2]^2`.
    pub fn l_shape() -> Self {
        Self::union(vec![
            AaBox { lo: vec![0.0, 0.0], hi: vec![2.0, 1.0] },
            AaBox { lo: vec![0.0, 1.0], hi: vec![1.0, 2.0] },
        ])
        .expect("valid L-shape")
    }

    pub fn union(parts: Vec<AaBox>) -> Result<Self> {
        if parts.is_empty() {
            return Err(invalid("empty union of boxes"));
        }
        let d = parts[0].dim();
        if parts.iter().any(|p| p.dim() != d || p.volume() <= 0.0 || !p.volume().is_finite()) {
            return Err(invalid("union parts must be finite nondegenerate boxes of one dimension"));
        }
        let faces = union_faces(&parts);
        Ok(Domain::Union(BoxUnion { parts, faces }))
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Box(b) => b.dim(),
            Domain::Strip { k, l } => k + l,
            Domain::Union(u) => u.parts[0].dim(),
        }
    }

    /// Whether the boundary consists of full axis-aligned faces, so that the
    /// distance from a box to the boundary is an axis gap.
    pub fn axis_aligned_boundary(&self) -> bool {
        !matches!(self, Domain::Union(_))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.delta(x) > 0.0
    }

    /// Distance to the boundary for points of Ω, 0 otherwise.
    pub fn delta(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Interval { a, b } => {
                let v = (x[0] - a).min(b - x[0]);
                v.max(0.0)
            }
            Domain::Box(bx) => {
                let mut m = f64::INFINITY;
                for i in 0..bx.dim() {
                    m = m.min(x[i] - bx.lo[i]).min(bx.hi[i] - x[i]);
                }
                m.max(0.0)
            }
            Domain::Strip { k, l } => {
                let mut m = f64::INFINITY;
                for &xi in &x[*k..k + l] {
                    m = m.min(xi).min(1.0 - xi);
                }
                m.max(0.0)
            }
            Domain::Union(u) => {
                if !u.parts.iter().any(|p| p.contains_point(x)) {
                    return 0.0;
                }
                u.faces.iter().map(|f| f.dist_point(x)).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Boundary faces as (possibly degenerate or unbounded) boxes.
    pub fn boundary_faces(&self) -> Vec<AaBox> {
        match self {
            Domain::Interval { a, b } => {
                vec![AaBox { lo: vec![*a], hi: vec![*a] }, AaBox { lo: vec![*b], hi: vec![*b] }]
            }
            Domain::Box(bx) => {
                let mut out = Vec::new();
                for i in 0..bx.dim() {
                    for v in [bx.lo[i], bx.hi[i]] {
                        let mut f = bx.clone();
                        f.lo[i] = v;
                        f.hi[i] = v;
                        out.push(f);
                    }
                }
                out
            }
            Domain::Strip { k, l } => {
                let d = k + l;
                let mut out = Vec::new();
                for i in *k..d {
                    for v in [0.0, 1.0] {
                        let mut lo = vec![f64::NEG_INFINITY; d];
                        let mut hi = vec![f64::INFINITY; d];
                        for j in *k..d {
                            lo[j] = 0.0;
                            hi[j] = 1.0;
                        }
                        lo[i] = v;
                        hi[i] = v;
                        out.push(AaBox { lo, hi });
                    }
                }
                out
            }
            Domain::Union(u) => u.faces.clone(),
        }
    }

    /// `d(B, ∂Ω)` for a box `B`.
    pub fn box_boundary_distance(&self, b: &AaBox) -> f64 {
        match self {
            Domain::Union(u) => u.faces.iter().map(|f| f.dist_box(b)).fold(f64::INFINITY, f64::min),
            _ => self.boundary_faces().iter().map(|f| f.dist_box(b)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Closed box contained in Ω with positive distance to the boundary.
    pub fn box_inside(&self, b: &AaBox) -> bool {
        self.contains(&b.center()) && self.box_boundary_distance(b) > 0.0
    }

    /// Box meets the closure of Ω.
    pub fn box_meets(&self, b: &AaBox) -> bool {
        self.contains(&b.center()) || self.box_boundary_distance(b) == 0.0
    }

    /// Diameter; `None` when unbounded.
    pub fn diam(&self) -> Option<f64> {
        match self {
            Domain::Interval { a, b } => Some(b - a),
            Domain::Box(bx) => Some(bx.diameter()),
            Domain::Strip { .. } => None,
            Domain::Union(u) => {
                let corners: Vec<Vec<f64>> = u.parts.iter().flat_map(corners).collect();
                let mut m = 0.0f64;
                for a in &corners {
                    for b in &corners {
                        m = m.max(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt());
                    }
                }
                Some(m)
            }
        }
    }

    /// `N(r) = inf{k : 2^k r > diam}`; `None` for unbounded domains.
    pub fn dyadic_steps(&self, r: f64) -> Option<usize> {
        self.diam().map(|d| crate::kernels::dyadic_steps(r, d))
    }

    /// Bounding box for bounded domains.
    pub fn bounding_box(&self) -> Option<AaBox> {
        match self {
            Domain::Interval { a, b } => Some(AaBox { lo: vec![*a], hi: vec![*b] }),
            Domain::Box(bx) => Some(bx.clone()),
            Domain::Strip { .. } => None,
            Domain::Union(u) => {
                let d = u.parts[0].dim();
                let lo = (0..d).map(|i| u.parts.iter().map(|p| p.lo[i]).fold(f64::INFINITY, f64::min)).collect();
                let hi = (0..d).map(|i| u.parts.iter().map(|p| p.hi[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
                Some(AaBox { lo, hi })
            }
        }
    }

    /// Convex domains admit the ray decomposition used by the seminorm engine.
    pub fn is_convex(&self) -> bool {
        !matches!(self, Domain::Union(_))
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval { a, b } => write!(f, "interval({a},{b})"),
            Domain::Box(b) => {
                let sides: Vec<String> = b.lo.iter().zip(&b.hi).map(|(x, y)| format!("[{x},{y}]")).collect();
                write!(f, "box({})", sides.join("x"))
            }
            Domain::Strip { k, l } => write!(f, "strip(k={k},l={l})"),
            Domain::Union(u) => write!(f, "union({} boxes)", u.parts.len()),
        }
    }
}

fn corners(b: &AaBox) -> Vec<Vec<f64>> {
    let d = b.dim();
    (0..1usize << d).map(|m| (0..d).map(|i| if m >> i & 1 == 1 { b.hi[i] } else { b.lo[i] }).collect()).collect()
}

/// Boundary faces of a union of boxes: the cell faces of the induced grid
/// that separate an inside cell from an outside one.
fn union_faces(parts: &[AaBox]) -> Vec<AaBox> {
    let d = parts[0].dim();
    let coords: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut c: Vec<f64> = parts.iter().flat_map(|p| [p.lo[i], p.hi[i]]).collect();
            c.sort_by(|a, b| a.partial_cmp(b).unwrap());
            c.dedup();
            c
        })
        .collect();
    let dims: Vec<usize> = coords.iter().map(|c| c.len() - 1).collect();
    let inside = |cell: &[isize]| -> bool {
        if cell.iter().zip(&dims).any(|(&c, &n)| c < 0 || c >= n as isize) {
            return false;
        }
        let mid: Vec<f64> =
            (0..d).map(|i| 0.5 * (coords[i][cell[i] as usize] + coords[i][cell[i] as usize + 1])).collect();
        parts.iter().any(|p| p.contains_point(&mid))
    };
    let total: usize = dims.iter().product();
    let mut faces = Vec::new();
    for flat in 0..total {
        let mut cell = vec![0isize; d];
        let mut r = flat;
        for i in 0..d {
            cell[i] = (r % dims[i]) as isize;
            r /= dims[i];
        }
        if !inside(&cell) {
            continue;
        }
        for i in 0..d {
            for step in [-1isize, 1] {
                let mut nb = cell.clone();
                nb[i] += step;
                if inside(&nb) {
                    continue;
                }
                let mut lo: Vec<f64> = (0..d).map(|j| coords[j][cell[j] as usize]).collect();
                let mut hi: Vec<f64> = (0..d).map(|j| coords[j][cell[j] as usize + 1]).collect();
                let v = if step < 0 { lo[i] } else { hi[i] };
                lo[i] = v;
                hi[i] = v;
                faces.push(AaBox { lo, hi });
            }
        }
    }
    faces
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_shape_geometry() {
        let l = Domain::l_shape();
        assert!(l.contains(&[0.5, 1.0]));
        assert!(l.contains(&[1.5, 0.5]));
        assert!(!l.contains(&[1.5, 1.5]));
        assert!((l.delta(&[0.5, 1.0]) - 0.5).abs() < 1e-15);
        // near the reentrant corner the distance is Euclidean
        let x = [0.9, 0.9];
        assert!((l.delta(&x) - (0.02f64).sqrt()).abs() < 1e-12);
        assert!((l.diam().unwrap() - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn strip_delta_uses_bounded_axes_only() {
        let s = Domain::strip(1, 2).unwrap();
        assert!((s.delta(&[-40.0, 0.2, 0.7]) - 0.2).abs() < 1e-15);
        assert_eq!(s.delta(&[0.0, 1.2, 0.5]), 0.0);
        assert!(s.diam().is_none());
        let faces = s.boundary_faces();
        let cube = AaBox::cube(&[3.0, 0.25, 0.25], 0.5);
        assert!((s.box_boundary_distance(&cube) - 0.25).abs() < 1e-15);
        assert_eq!(faces.len(), 4);
    }

    #[test]
    fn box_distances() {
        let a = AaBox::cube(&[0.0, 0.0], 1.0);
        let b = AaBox::cube(&[4.0, 0.0], 1.0);
        assert_eq!(a.dist_box(&b), 3.0);
        assert_eq!(a.dist_point(&[0.5, 0.5]), 0.0);
        assert!((a.farthest_point_dist(&[0.5, 0.5]) - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
