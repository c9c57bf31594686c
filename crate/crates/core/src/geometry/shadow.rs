use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::chain::{admissible_chain, Chain};
use super::domain::AaBox;
use super::whitney::{default_rho, WhitneyDecomposition};
use crate::error::Result;

#[inline]
fn in_shadow(w: &WhitneyDecomposition, owner: usize, member: usize, rho: f64) -> bool {
    let o = &w.cubes[owner];
    w.cubes[member].extent().farthest_point_dist(&o.center()) <= rho * o.side * (1.0 + 1e-12)
}

/// `Sh_ρ(Q)`: cubes contained in `B(x_Q, ρ·l(Q))`, sorted by id.
pub fn shadow(w: &WhitneyDecomposition, q: usize, rho: f64) -> Vec<usize> {
    let c = &w.cubes[q];
    let r = rho * c.side;
    let center = c.center();
    let ball = AaBox { lo: center.iter().map(|x| x - r).collect(), hi: center.iter().map(|x| x + r).collect() };
    w.candidates(&ball).into_iter().filter(|&j| in_shadow(w, q, j, rho)).collect()
}

/// Failures of the three shadow-radius conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowBullets {
    pub rho: f64,
    /// Chains where an end cube is missing from the shadow of a cube between
    /// it and the central cube.
    pub bullet1_failures: usize,
    /// Chains with a cube outside the shadow of the central cube.
    pub bullet2_failures: usize,
    /// Non-frontier cubes whose `5Q` is not covered by their shadow.
    pub bullet3_failures: usize,
    pub chains_checked: usize,
    pub cubes_checked: usize,
}

impl ShadowBullets {
    pub fn hold(&self) -> bool {
        self.bullet1_failures + self.bullet2_failures + self.bullet3_failures == 0
    }
}

pub fn check_shadow_bullets(w: &WhitneyDecomposition, rho: f64, chains: &[Chain]) -> ShadowBullets {
    let mut b1 = 0;
    let mut b2 = 0;
    for c in chains {
        let j0 = c.central_index;
        let (q, s) = (c.first(), c.last());
        let ok1 = c.cubes[..=j0].iter().all(|&p| in_shadow(w, p, q, rho))
            && c.cubes[j0..].iter().all(|&p| in_shadow(w, p, s, rho));
        if !ok1 {
            b1 += 1;
        }
        if !c.cubes.iter().all(|&p| in_shadow(w, c.central(), p, rho)) {
            b2 += 1;
        }
    }
    let mut b3 = 0;
    let mut checked = 0;
    for q in 0..w.len() {
        if w.frontier[q] {
            continue;
        }
        checked += 1;
        let five = w.cubes[q].extent().scaled(5.0);
        let covered = w
            .candidates(&five)
            .into_iter()
            .filter(|&j| five.overlap_volume(&w.cubes[j].extent()) > 0.0)
            .all(|j| in_shadow(w, q, j, rho));
        if !covered {
            b3 += 1;
        }
    }
    ShadowBullets {
        rho,
        bullet1_failures: b1,
        bullet2_failures: b2,
        bullet3_failures: b3,
        chains_checked: chains.len(),
        cubes_checked: checked,
    }
}

/// Deterministic pseudo-random cube pairs plus the pair of extreme cubes.
pub fn sample_pairs(w: &WhitneyDecomposition, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let n = w.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(usize, usize)> = (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    if n > 1 {
        out.push((0, n - 1));
    }
    out
}

/// Result of the shadow-radius calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoCalibration {
    pub rho: f64,
    pub doublings: usize,
    pub bullets: ShadowBullets,
    pub min_eps: f64,
}

/// Starts from `3√d/ε_floor` and doubles ρ until the three shadow
/// conditions hold on chains between sampled pairs (at most 12 doublings).
pub fn calibrate_rho(w: &WhitneyDecomposition, eps_floor: f64, pairs: usize, seed: u64) -> Result<RhoCalibration> {
    let chains: Vec<Chain> =
        sample_pairs(w, pairs, seed).into_iter().map(|(a, b)| admissible_chain(w, a, b)).collect::<Result<_>>()?;
    let min_eps = chains.iter().map(|c| c.eps_achieved).fold(f64::INFINITY, f64::min);
    let mut rho = default_rho(w.dim(), eps_floor);
    let mut doublings = 0;
    loop {
        let bullets = check_shadow_bullets(w, rho, &chains);
        if bullets.hold() || doublings >= 12 {
            return Ok(RhoCalibration { rho, doublings, bullets, min_eps });
        }
        rho *= 2.0;
        doublings += 1;
    }
}

/// Smallest radius of the form `3√d·2^k` passing the three conditions.
pub fn minimal_rho(w: &WhitneyDecomposition, pairs: usize, seed: u64) -> Result<RhoCalibration> {
    calibrate_rho(w, 1.0, pairs, seed)
}

/// Random shadow pair `(S, R)` with `S ∈ Sh_ρ(R)`.
pub(crate) fn random_shadow_pair(w: &WhitneyDecomposition, rho: f64, rng: &mut ChaCha8Rng) -> (usize, usize) {
    loop {
        let r = rng.gen_range(0..w.len());
        let sh = shadow(w, r, rho);
        if !sh.is_empty() {
            let s = sh[rng.gen_range(0..sh.len())];
            return (s, r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{whitney_decompose, Domain};

    #[test]
    fn minimal_self_shadow_radius() {
        let w = whitney_decompose(&Domain::unit_square(), 6, None).unwrap();
        let half_diag = 2f64.sqrt() / 2.0;
        assert!(shadow(&w, 5, half_diag * (1.0 + 1e-9)).contains(&5));
        assert!(!shadow(&w, 5, half_diag * 0.999).contains(&5));
        assert!(shadow(&w, 5, 0.4).is_empty());
    }

    #[test]
    fn huge_radius_covers_everything() {
        let w = whitney_decompose(&Domain::unit_square(), 6, None).unwrap();
        assert_eq!(shadow(&w, 0, 1e6).len(), w.len());
    }
}
