use serde::{Deserialize, Serialize};

use super::grid::{maximal_function, GridFunction};
use crate::error::{invalid, Error, Result};
use crate::kernels::{ExponentPair, Kernel};
use crate::quad::GaussLegendre;

/// Directions used for the planar far-field integrals.
const PLANAR_ANGLES: usize = 2048;

/// One evaluation of a far-field maximal inequality at `(x, r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalFarReport {
    pub x: Vec<f64>,
    pub r: f64,
    /// The far-field integral.
    pub lhs: f64,
    pub maximal: f64,
    /// Normalizing factor the integral is multiplied by (`φ(r)^η`) or
    /// divided by (`|ln r| ∨ 1`).
    pub scale: f64,
    pub ratio: f64,
}

/// `∫_{|y-x|>r} g(y) ψ(|y-x|) |y-x|^{-d} dy` over the grid box.
///
/// Along each ray the data is constant between grid-line crossings, and the
/// radial factor `ρ^{-d} ρ^{d-1} dρ = du` for `u = ln ρ` leaves `ψ(e^u) du`,
/// integrated with Gauss panels of width `ln 2`.
fn far_integral(g: &GridFunction, x: &[f64], r: f64, psi: &(dyn Fn(f64) -> f64 + Sync)) -> f64 {
    let rule = GaussLegendre::cached(8);
    let radial = |a: f64, b: f64| {
        let (ua, ub) = (a.ln(), b.ln());
        let panels = ((ub - ua) / std::f64::consts::LN_2).ceil().max(1.0) as usize;
        let h = (ub - ua) / panels as f64;
        (0..panels).map(|k| rule.integrate(ua + k as f64 * h, ua + (k + 1) as f64 * h, |u| psi(u.exp()))).sum::<f64>()
    };
    let ray = |dir: &[f64]| -> f64 {
        let d = g.dim();
        let mut exit = f64::INFINITY;
        let mut cuts = vec![r];
        for a in 0..d {
            if dir[a] == 0.0 {
                continue;
            }
            let face = if dir[a] > 0.0 { g.hi()[a] } else { g.lo()[a] };
            exit = exit.min((face - x[a]) / dir[a]);
            let h = g.spacing(a);
            for k in 0..=g.cells()[a] {
                let rho = (g.lo()[a] + k as f64 * h - x[a]) / dir[a];
                if rho > r {
                    cuts.push(rho);
                }
            }
        }
        if !(exit > r) {
            return 0.0;
        }
        cuts.retain(|&c| c <= exit);
        cuts.push(exit);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut s = 0.0;
        let mut y = [0.0; 2];
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            for a in 0..d {
                y[a] = x[a] + mid * dir[a];
            }
            let v = g.at(&y[..d]);
            if v > 0.0 {
                s += v * radial(w[0], w[1]);
            }
        }
        s
    };
    match g.dim() {
        1 => ray(&[1.0]) + ray(&[-1.0]),
        _ => {
            let w = std::f64::consts::TAU / PLANAR_ANGLES as f64;
            (0..PLANAR_ANGLES)
                .map(|j| {
                    let t = w * (j as f64 + 0.5);
                    w * ray(&[t.cos(), t.sin()])
                })
                .sum()
        }
    }
}

/// Far-field bound for a profile kernel: returns
/// `φ(r)^η ∫_{|x-y|>r} g(y) / (|x-y|^d φ(|x-y|)^η) dy / Mg(x)`, which stays
/// bounded in `x` and `r` for `η ≥ min(q, p - p/q)`.
pub fn check_maximal_far(
    g: &GridFunction,
    kernel: &Kernel,
    exps: &ExponentPair,
    eta: f64,
    r: f64,
    x: &[f64],
) -> Result<MaximalFarReport> {
    if kernel.d != g.dim() {
        return Err(invalid(format!("kernel dimension {} does not match the grid dimension {}", kernel.d, g.dim())));
    }
    let phi = kernel.profile().ok_or_else(|| Error::Unsupported("the flat kernel has no profile".into()))?;
    if !(eta >= exps.t1()) {
        return Err(Error::Precondition(format!("η = {eta} is below min(q, p - p/q) = {}", exps.t1())));
    }
    if !(r > 0.0 && r < 3.0 * g.diameter()) {
        return Err(invalid(format!("r must lie in (0, 3 diam), got {r}")));
    }
    let maximal = maximal_function(g, x)?;
    let lhs = far_integral(g, x, r, &|rho| phi.eval_unchecked(rho).powf(-eta));
    let scale = phi.eval_unchecked(r).powf(eta);
    let ratio = if maximal > 0.0 { lhs * scale / maximal } else { 0.0 };
    Ok(MaximalFarReport { x: x.to_vec(), r, lhs, maximal, scale, ratio })
}

/// Far-field bound for the zero-order kernel: returns
/// `∫_{|y-x|>r} g(y) |y-x|^{-d} dy / (Mg(x) (|ln r| ∨ 1))`.
pub fn check_maximal_far_log(g: &GridFunction, r: f64, x: &[f64]) -> Result<MaximalFarReport> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("r must be positive, got {r}")));
    }
    let maximal = maximal_function(g, x)?;
    let lhs = far_integral(g, x, r, &|_| 1.0);
    let scale = r.ln().abs().max(1.0);
    let ratio = if maximal > 0.0 { lhs / (maximal * scale) } else { 0.0 };
    Ok(MaximalFarReport { x: x.to_vec(), r, lhs, maximal, scale, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_integral_of_a_constant() {
        let g = GridFunction::sample(vec![0.0], vec![1.0], vec![8], |_| 1.0).unwrap();
        for r in [1e-2, 1e-3, 1e-4] {
            let rep = check_maximal_far_log(&g, r, &[0.5]).unwrap();
            let exact = 2.0 * (0.5 / r).ln();
            assert!((rep.lhs - exact).abs() < 1e-12 * exact, "{} vs {exact}", rep.lhs);
        }
        assert_eq!(check_maximal_far_log(&g, 2.0, &[0.5]).unwrap().ratio, 0.0);
    }
}
