use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Nonnegative piecewise-constant data on a uniform grid of cells over a
/// box in dimension 1 or 2. Cell values are stored with axis 0 fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    lo: Vec<f64>,
    hi: Vec<f64>,
    cells: Vec<usize>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, cells: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let d = lo.len();
        if !(1..=2).contains(&d) {
            return Err(Error::Unsupported(format!("grid functions in dimension {d}")));
        }
        if hi.len() != d || cells.len() != d {
            return Err(invalid("grid bounds and cell counts must share one dimension"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(invalid("grid bounds must satisfy lo < hi"));
        }
        if cells.contains(&0) {
            return Err(invalid("every axis needs at least one cell"));
        }
        if values.len() != cells.iter().product::<usize>() {
            return Err(invalid(format!(
                "expected {} cell values, got {}",
                cells.iter().product::<usize>(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(invalid(format!("grid values must be finite and nonnegative, got {v}")));
        }
        Ok(Self { lo, hi, cells, values })
    }

    /// Samples `g` at cell centers.
    pub fn sample(lo: Vec<f64>, hi: Vec<f64>, cells: Vec<usize>, g: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let n: usize = cells.iter().product();
        let mut values = Vec::with_capacity(n);
        let mut x = vec![0.0; lo.len()];
        for k in 0..n {
            let mut rest = k;
            for a in 0..lo.len() {
                let i = rest % cells[a];
                rest /= cells[a];
                x[a] = lo[a] + (i as f64 + 0.5) * (hi[a] - lo[a]) / cells[a] as f64;
            }
            values.push(g(&x));
        }
        Self::new(lo, hi, cells, values)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.cells[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn diameter(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }

    /// Value of the cell with multi-index `idx`.
    pub fn value(&self, idx: &[usize]) -> f64 {
        let k = if self.dim() == 1 { idx[0] } else { idx[0] + self.cells[0] * idx[1] };
        self.values[k]
    }

    /// Value at `y`; 0 outside the box. Points on a cell face take the cell
    /// above.
    pub fn at(&self, y: &[f64]) -> f64 {
        let mut idx = [0usize; 2];
        for a in 0..self.dim() {
            if !(y[a] >= self.lo[a] && y[a] <= self.hi[a]) {
                return 0.0;
            }
            idx[a] = (((y[a] - self.lo[a]) / self.spacing(a)) as usize).min(self.cells[a] - 1);
        }
        self.value(&idx[..self.dim()])
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.lo.clone(), self.hi.clone(), self.cells.clone(), self.values.iter().map(|v| v * c).collect())
    }

    /// Sum of two grid functions on the same grid.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.lo != other.lo || self.hi != other.hi || self.cells != other.cells {
            return Err(invalid("grid functions live on different grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self::new(self.lo.clone(), self.hi.clone(), self.cells.clone(), values)
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(invalid(format!("point must have dimension {}", self.dim())));
        }
        if (0..self.dim()).any(|a| !(x[a] >= self.lo[a] && x[a] <= self.hi[a])) {
            return Err(invalid(format!("point {x:?} lies outside the grid box")));
        }
        Ok(())
    }

    /// Grid lines `(first, last)` usable as lower and upper box corners
    /// around `x` along `axis`: lower index `≤ first`, upper index `≥ last`.
    fn corner_range(&self, axis: usize, x: f64) -> (usize, usize) {
        let n = self.cells[axis];
        let t = (x - self.lo[axis]) / self.spacing(axis);
        let snapped = t.round();
        // a point on a grid line may use it from both sides
        let t = if (t - snapped).abs() <= 1e-9 { snapped } else { t };
        let first = (t.floor().max(0.0) as usize).min(n);
        let last = (t.ceil().max(0.0) as usize).min(n);
        (first, last)
    }
}

/// Non-centered maximal function: the largest average of `g` over boxes
/// with grid-line faces that contain `x`. Exact for the piecewise-constant
/// data; the search is exhaustive with prefix sums.
pub fn maximal_function(g: &GridFunction, x: &[f64]) -> Result<f64> {
    g.check_point(x)?;
    match g.dim() {
        1 => Ok(maximal_1d(g, x[0])),
        _ => Ok(maximal_2d(g, x)),
    }
}

fn maximal_1d(g: &GridFunction, x: f64) -> f64 {
    let n = g.cells[0];
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + g.values[i];
    }
    let (first, last) = g.corner_range(0, x);
    let mut best = 0.0f64;
    for i in 0..=first {
        for j in last.max(i + 1)..=n {
            best = best.max((prefix[j] - prefix[i]) / (j - i) as f64);
        }
    }
    best
}

fn maximal_2d(g: &GridFunction, x: &[f64]) -> f64 {
    let (n0, n1) = (g.cells[0], g.cells[1]);
    let w = n0 + 1;
    let mut prefix = vec![0.0; w * (n1 + 1)];
    for j in 0..n1 {
        for i in 0..n0 {
            prefix[(j + 1) * w + i + 1] =
                g.values[i + n0 * j] + prefix[j * w + i + 1] + prefix[(j + 1) * w + i] - prefix[j * w + i];
        }
    }
    let rect = |i0: usize, i1: usize, j0: usize, j1: usize| {
        prefix[j1 * w + i1] - prefix[j0 * w + i1] - prefix[j1 * w + i0] + prefix[j0 * w + i0]
    };
    let (f0, l0) = g.corner_range(0, x[0]);
    let (f1, l1) = g.corner_range(1, x[1]);
    let mut best = 0.0f64;
    for i0 in 0..=f0 {
        for i1 in l0.max(i0 + 1)..=n0 {
            for j0 in 0..=f1 {
                for j1 in l1.max(j0 + 1)..=n1 {
                    let count = ((i1 - i0) * (j1 - j0)) as f64;
                    best = best.max(rect(i0, i1, j0, j1) / count);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_on_a_wide_grid() {
        let g =
            GridFunction::sample(
                vec![-2.0],
                vec![4.0],
                vec![6],
                |y| if (0.0..1.0).contains(&y[0]) { 1.0 } else { 0.0 },
            )
            .unwrap();
        assert_eq!(maximal_function(&g, &[2.0]).unwrap(), 0.5);
        assert_eq!(maximal_function(&g, &[0.5]).unwrap(), 1.0);
        assert!(maximal_function(&g, &[4.5]).is_err());
    }

    #[test]
    fn constant_data_in_the_plane() {
        let g = GridFunction::sample(vec![0.0, 0.0], vec![1.0, 2.0], vec![5, 7], |_| 3.0).unwrap();
        assert_eq!(maximal_function(&g, &[0.3, 1.1]).unwrap(), 3.0);
    }

    #[test]
    fn rejects_negative_values() {
        assert!(GridFunction::new(vec![0.0], vec![1.0], vec![2], vec![1.0, -1.0]).is_err());
    }
}
