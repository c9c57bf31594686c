use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::harmonic::FourierSeries;

/// Explicit test functions. Points are slices whose first entry is `x₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum TestFunction {
    /// `x^{-γ}` on (0, 1), γ ∈ (0, 1/2).
    PowerGamma {
        gamma: f64,
    },
    /// `n ∧ 1/x` on (0, 1).
    CappedReciprocal {
        n: f64,
    },
    /// `(1 - |x₁|/n) ∨ 0`.
    StripRamp {
        n: f64,
    },
    Coordinate {
        axis: usize,
    },
    Constant {
        c: f64,
    },
    /// Real part of a sparse 1-periodic series in `x₁`.
    SparseFourier {
        series: FourierSeries,
    },
    /// Product of all coordinates.
    CoordinateProduct,
    /// `exp(-|x - c|² / w²)`.
    GaussianBump {
        center: Vec<f64>,
        width: f64,
    },
    /// `x_axis^{exponent}` (any real exponent), for positive coordinates.
    AxisPower {
        axis: usize,
        exponent: f64,
    },
    /// `f(x - offset)`.
    Shifted {
        inner: Box<TestFunction>,
        offset: Vec<f64>,
    },
    /// `factor · f(x)`.
    Scaled {
        inner: Box<TestFunction>,
        factor: f64,
    },
}

impl TestFunction {
    pub fn validate(&self) -> Result<()> {
        match self {
            TestFunction::PowerGamma { gamma } if !(*gamma > 0.0 && *gamma < 0.5) => {
                Err(invalid(format!("power exponent must lie in (0, 1/2), got {gamma}")))
            }
            TestFunction::CappedReciprocal { n } | TestFunction::StripRamp { n } if !(*n >= 1.0 && n.is_finite()) => {
                Err(invalid(format!("family index must be a finite n >= 1, got {n}")))
            }
            TestFunction::GaussianBump { width, .. } if !(*width > 0.0) => Err(invalid("bump width must be positive")),
            TestFunction::AxisPower { exponent, .. } if !exponent.is_finite() => {
                Err(invalid("exponent must be finite"))
            }
            TestFunction::Shifted { inner, .. } | TestFunction::Scaled { inner, .. } => inner.validate(),
            _ => Ok(()),
        }
    }

    /// Dimension the function needs, when it is pinned (coordinate indices
    /// and bump centers impose a minimum).
    pub fn min_dim(&self) -> usize {
        match self {
            TestFunction::Coordinate { axis } | TestFunction::AxisPower { axis, .. } => axis + 1,
            TestFunction::GaussianBump { center, .. } => center.len(),
            TestFunction::Shifted { inner, offset } => inner.min_dim().max(offset.len()),
            TestFunction::Scaled { inner, .. } => inner.min_dim(),
            _ => 1,
        }
    }

    /// Evaluates at `x`. Series with symbolic frequencies evaluate to NaN.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::PowerGamma { gamma } => x[0].powf(-gamma),
            TestFunction::CappedReciprocal { n } => n.min(1.0 / x[0]),
            TestFunction::StripRamp { n } => (1.0 - x[0].abs() / n).max(0.0),
            TestFunction::Coordinate { axis } => x[*axis],
            TestFunction::Constant { c } => *c,
            TestFunction::SparseFourier { series } => series.eval(x[0]).unwrap_or(f64::NAN),
            TestFunction::CoordinateProduct => x.iter().product(),
            TestFunction::GaussianBump { center, width } => {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                (-r2 / (width * width)).exp()
            }
            TestFunction::AxisPower { axis, exponent } => x[*axis].powf(*exponent),
            TestFunction::Shifted { inner, offset } => {
                let y: Vec<f64> =
                    x.iter().enumerate().map(|(i, v)| v - offset.get(i).copied().unwrap_or(0.0)).collect();
                inner.eval(&y)
            }
            TestFunction::Scaled { inner, factor } => factor * inner.eval(x),
        }
    }

    /// Same as [`eval`](Self::eval) for functions of `x₁` alone.
    pub fn eval1(&self, t: f64) -> f64 {
        self.eval(&[t])
    }

    /// Abscissae in `x₁` where the function has a kink, for functions of `x₁`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            TestFunction::CappedReciprocal { n } => vec![1.0 / n],
            TestFunction::StripRamp { n } => vec![-n, 0.0, *n],
            TestFunction::Shifted { inner, offset } => {
                let s = offset.first().copied().unwrap_or(0.0);
                inner.breakpoints().into_iter().map(|b| b + s).collect()
            }
            TestFunction::Scaled { inner, .. } => inner.breakpoints(),
            _ => Vec::new(),
        }
    }

    /// True when the value depends on `x₁` only.
    pub fn depends_on_first_axis_only(&self) -> bool {
        match self {
            TestFunction::Coordinate { axis } | TestFunction::AxisPower { axis, .. } => *axis == 0,
            TestFunction::GaussianBump { center, .. } => center.len() <= 1,
            TestFunction::CoordinateProduct => false,
            TestFunction::Shifted { inner, .. } | TestFunction::Scaled { inner, .. } => {
                inner.depends_on_first_axis_only()
            }
            _ => true,
        }
    }

    /// Support in `x₁` for compactly supported functions of `x₁`.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            TestFunction::StripRamp { n } => Some((-n, *n)),
            TestFunction::Constant { c } if *c == 0.0 => Some((0.0, 0.0)),
            TestFunction::Shifted { inner, offset } => {
                let s = offset.first().copied().unwrap_or(0.0);
                inner.support().map(|(a, b)| (a + s, b + s))
            }
            TestFunction::Scaled { inner, .. } => inner.support(),
            _ => None,
        }
    }

    /// Known bound on `|f|` over the natural domain.
    pub fn sup_bound(&self) -> Option<f64> {
        match self {
            TestFunction::CappedReciprocal { n } => Some(*n),
            TestFunction::StripRamp { .. } | TestFunction::GaussianBump { .. } => Some(1.0),
            TestFunction::Constant { c } => Some(c.abs()),
            TestFunction::Scaled { inner, factor } => inner.sup_bound().map(|b| b * factor.abs()),
            TestFunction::Shifted { inner, .. } => inner.sup_bound(),
            _ => None,
        }
    }

    /// Known Lipschitz constant over the natural domain.
    pub fn lipschitz(&self) -> Option<f64> {
        match self {
            TestFunction::CappedReciprocal { n } => Some(n * n),
            TestFunction::StripRamp { n } => Some(1.0 / n),
            TestFunction::Coordinate { .. } => Some(1.0),
            TestFunction::Constant { .. } => Some(0.0),
            TestFunction::GaussianBump { width, .. } => Some((2.0f64).sqrt() * (-0.5f64).exp() / width),
            TestFunction::Scaled { inner, factor } => inner.lipschitz().map(|l| l * factor.abs()),
            TestFunction::Shifted { inner, .. } => inner.lipschitz(),
            _ => None,
        }
    }

    /// True when `f` is unbounded near the boundary of its natural domain,
    /// so graded ends need tail estimates rather than a closing panel.
    pub fn blows_up_at_boundary(&self) -> bool {
        match self {
            TestFunction::PowerGamma { .. } => true,
            TestFunction::AxisPower { exponent, .. } => *exponent < 0.0,
            TestFunction::Shifted { inner, .. } | TestFunction::Scaled { inner, .. } => inner.blows_up_at_boundary(),
            _ => false,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            TestFunction::Constant { .. } => true,
            TestFunction::Scaled { inner, factor } => *factor == 0.0 || inner.is_constant(),
            TestFunction::Shifted { inner, .. } => inner.is_constant(),
            _ => false,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestFunction::PowerGamma { gamma } => format!("x^-{gamma}"),
            TestFunction::CappedReciprocal { n } => format!("min({n},1/x)"),
            TestFunction::StripRamp { n } => format!("ramp({n})"),
            TestFunction::Coordinate { axis } => format!("x{}", axis + 1),
            TestFunction::Constant { c } => format!("const({c})"),
            TestFunction::SparseFourier { series } => format!("fourier[{}]", series.len()),
            TestFunction::CoordinateProduct => "prod(x)".to_string(),
            TestFunction::GaussianBump { width, .. } => format!("bump({width})"),
            TestFunction::AxisPower { axis, exponent } => format!("x{}^{exponent}", axis + 1),
            TestFunction::Shifted { inner, .. } => format!("shift({})", inner.label()),
            TestFunction::Scaled { inner, factor } => format!("{factor}*{}", inner.label()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(TestFunction::PowerGamma { gamma: 0.25 }.eval1(1.0 / 16.0), 2.0);
        assert_eq!(TestFunction::CappedReciprocal { n: 4.0 }.eval1(0.1), 4.0);
        assert_eq!(TestFunction::CappedReciprocal { n: 4.0 }.eval1(0.5), 2.0);
        assert_eq!(TestFunction::StripRamp { n: 4.0 }.eval(&[-2.0, 0.3]), 0.5);
        assert_eq!(TestFunction::StripRamp { n: 4.0 }.eval1(7.0), 0.0);
    }

    #[test]
    fn shifting_moves_breakpoints_and_support() {
        let f = TestFunction::Shifted { inner: Box::new(TestFunction::StripRamp { n: 2.0 }), offset: vec![1.0] };
        assert_eq!(f.breakpoints(), vec![-1.0, 1.0, 3.0]);
        assert_eq!(f.support(), Some((-1.0, 3.0)));
        assert_eq!(f.eval1(1.0), 1.0);
    }

    #[test]
    fn validation_rejects_out_of_range_parameters() {
        assert!(TestFunction::PowerGamma { gamma: 0.5 }.validate().is_err());
        assert!(TestFunction::CappedReciprocal { n: 0.5 }.validate().is_err());
        assert!(TestFunction::PowerGamma { gamma: 0.49 }.validate().is_ok());
    }
}
