//! Angular integration around a point of a rectangle.

use crate::quad::GaussLegendre;

/// Visits directions `ω` around `x ∈ (lo, hi)` with weights for `∫ dω`,
/// together with the exit distance `ρ_B(ω)`.
///
/// Each side is parametrized by its points `s`, with `dω = h/ρ_B² ds` for
/// the distance `h` to the side. Panels grow geometrically away from the
/// foot of the perpendicular, so sides close to `x` are resolved on the scale
/// `h`.
pub(crate) fn sweep_rectangle(
    lo: [f64; 2],
    hi: [f64; 2],
    x: [f64; 2],
    order: usize,
    mut visit: impl FnMut(f64, f64, f64),
) {
    let rule = GaussLegendre::cached(order);
    for axis in 0..2 {
        let other = 1 - axis;
        for v in [lo[axis], hi[axis]] {
            let h = (v - x[axis]).abs();
            let foot = x[other];
            for (end, sign) in [(lo[other], -1.0), (hi[other], 1.0)] {
                let len = (end - foot).abs();
                let mut a = 0.0;
                let mut w = h;
                while a < len {
                    let mut b = (a + w).min(len);
                    if len - b < 0.5 * w {
                        b = len;
                    }
                    rule.map(a, b, |u, wt| {
                        let mut d = [0.0; 2];
                        d[axis] = v - x[axis];
                        d[other] = sign * u;
                        let r2 = d[0] * d[0] + d[1] * d[1];
                        visit(d[1].atan2(d[0]), wt * h / r2, r2.sqrt());
                    });
                    a = b;
                    if a >= h {
                        w = a;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_turn_and_area() {
        for x in [[0.5, 0.5], [0.1, 0.3], [1e-4, 0.49], [0.999, 0.999]] {
            let (mut turn, mut area) = (0.0, 0.0);
            sweep_rectangle([0.0, 0.0], [1.0, 1.0], x, 8, |_, w, r| {
                turn += w;
                area += 0.5 * w * r * r;
            });
            assert!((turn - std::f64::consts::TAU).abs() < 1e-9, "{x:?}: {turn}");
            assert!((area - 1.0).abs() < 1e-9, "{x:?}: {area}");
        }
    }
}
