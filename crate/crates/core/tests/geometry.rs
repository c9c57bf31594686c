use std::collections::BTreeMap;

use proptest::prelude::*;
use seminorm_core::geometry::{
    admissible_chain, chain_ratio, lemma_chain_sum, lemma_shadow_sum, lemma_sum_all_over, long_distance, minimal_rho,
    sample_pairs, shadow, verify_whitney, whitney_decompose, AaBox, DyadicCube, PairSampling, WhitneyDecomposition,
    DEFAULT_EPS_FLOOR,
};
use seminorm_core::{Domain, ExponentPair, KernelProfile};

fn level_counts(w: &WhitneyDecomposition) -> BTreeMap<i32, usize> {
    let mut m = BTreeMap::new();
    for c in &w.cubes {
        *m.entry(c.level).or_insert(0) += 1;
    }
    m
}

#[test]
fn interval_decomposition_is_reflection_symmetric() {
    // with C_W = 4.5 the first interval cubes appear at level 4
    assert!(whitney_decompose(&Domain::unit_interval(), 3, None).is_err());
    let w = whitney_decompose(&Domain::unit_interval(), 6, None).unwrap();
    let mut left: Vec<(i64, f64)> = w.cubes.iter().map(|c| ((c.lo[0] * 1024.0).round() as i64, c.side)).collect();
    let mut right: Vec<(i64, f64)> =
        w.cubes.iter().map(|c| (((1.0 - c.lo[0] - c.side) * 1024.0).round() as i64, c.side)).collect();
    left.sort_by(|a, b| a.partial_cmp(b).unwrap());
    right.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(left, right);
}

#[test]
fn interval_ladder_counts() {
    // level 4 keeps j/16 with min(j, 15 - j) >= 5; every finer level keeps
    // indices 5..=9 from each end
    for depth in [4, 6, 9] {
        let w = whitney_decompose(&Domain::unit_interval(), depth, None).unwrap();
        let counts = level_counts(&w);
        assert_eq!(*counts.keys().next().unwrap(), 4);
        for (&level, &n) in &counts {
            assert_eq!(n, if level == 4 { 6 } else { 10 }, "depth {depth}, level {level}: {counts:?}");
        }
        assert_eq!(*counts.keys().last().unwrap(), depth);
        assert_eq!(verify_whitney(&w).total(), 0);
    }
}

#[test]
fn unit_square_depth_eight_has_no_violations() {
    let w = whitney_decompose(&Domain::unit_square(), 8, None).unwrap();
    let r = verify_whitney(&w);
    assert_eq!(r.total(), 0, "{r:?}");
    assert!(r.axiom4_checked > 0);
}

#[test]
fn injected_violations_are_counted() {
    let dom = Domain::boxed(vec![0.0, 0.0], vec![4.0, 4.0]).unwrap();
    let a = DyadicCube::new(0, vec![1, 1], 1.0, &[0.0, 0.0]);
    let overlapping = DyadicCube { level: 1, index: vec![3, 3], side: 0.5, lo: vec![1.5, 1.5] };
    let w = WhitneyDecomposition::from_cubes(dom.clone(), vec![a.clone(), overlapping], 0.0, 4);
    assert_eq!(verify_whitney(&w).counts[0], 1);

    // side ratio 4 between neighbors
    let small = DyadicCube::new(2, vec![8, 4], 1.0, &[0.0, 0.0]);
    let w = WhitneyDecomposition::from_cubes(dom, vec![a, small], 0.0, 4);
    assert_eq!(verify_whitney(&w).counts[1], 1);
}

#[test]
fn long_distance_documented_values() {
    let a = DyadicCube::new(0, vec![0], 1.0, &[0.0]);
    assert_eq!(long_distance(&a, &a), 2.0);
    assert_eq!(long_distance(&a, &DyadicCube::new(0, vec![4], 1.0, &[0.0])), 5.0);
    assert_eq!(long_distance(&a, &DyadicCube::new(1, vec![2], 1.0, &[0.0])), 1.5);
}

#[test]
fn two_cube_system_sum() {
    // unit cubes [0,1] and [2,3]: T(Q) = 1/D(Q,Q) + 1/D(Q,S) = 1/2 + 1/3
    let dom = Domain::interval(-10.0, 10.0).unwrap();
    let cubes = vec![DyadicCube::new(0, vec![0], 1.0, &[0.0]), DyadicCube::new(0, vec![2], 1.0, &[0.0])];
    let w = WhitneyDecomposition::from_cubes(dom, cubes, 1.0, 0);
    let r = lemma_sum_all_over(&w, &KernelProfile::ConstantOne, 1.0, &ExponentPair::hilbert()).unwrap();
    assert!((r.constant - 5.0 / 6.0).abs() < 1e-15, "{}", r.constant);
    assert_eq!(r.rows.len(), 2);
}

#[test]
fn single_cube_lemma_bounds() {
    let dom = Domain::interval(-10.0, 10.0).unwrap();
    let w = WhitneyDecomposition::from_cubes(dom, vec![DyadicCube::new(0, vec![0], 1.0, &[0.0])], 1.0, 0);
    let exps = ExponentPair::hilbert();
    let phi = KernelProfile::power(0.5);
    let all = lemma_sum_all_over(&w, &phi, 1.0, &exps).unwrap().constant;
    assert!(all <= 0.5 + 1e-15);
    let w = w.with_rho(10.0);
    let sh = lemma_shadow_sum(&w, &phi, 1.0, &exps).unwrap().constant;
    assert!(sh <= 1.0 + 1e-15);
    assert!((chain_ratio(&w, &phi, 1.0, 0, 0).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn minimal_self_shadow_radius_is_half_diagonal() {
    let w = whitney_decompose(&Domain::unit_square(), 4, None).unwrap();
    let q = w.central_cube();
    let half = 2f64.sqrt() / 2.0;
    assert!(shadow(&w, q, 0.4).is_empty());
    assert!(!shadow(&w, q, half * (1.0 - 1e-9)).contains(&q));
    assert!(shadow(&w, q, half * (1.0 + 1e-9)).contains(&q));
    assert_eq!(shadow(&w, q, 1e3).len(), w.len());
}

#[test]
fn default_shadow_of_central_cube_contains_its_neighbors() {
    let w = whitney_decompose(&Domain::unit_square(), 6, None).unwrap();
    let q = w.central_cube();
    let sh = shadow(&w, q, w.rho);
    assert!(w.neighbors[q].iter().all(|n| sh.contains(n)));
}

#[test]
fn chains_between_opposite_corners() {
    let w = whitney_decompose(&Domain::unit_square(), 6, None).unwrap();
    let finest = w.cubes.iter().map(|c| c.level).max().unwrap();
    let corner = |x: f64, y: f64| {
        (0..w.len())
            .filter(|&i| w.cubes[i].level == finest)
            .min_by(|&a, &b| {
                let d = |i: usize| {
                    let c = w.cubes[i].center();
                    (c[0] - x).hypot(c[1] - y)
                };
                d(a).partial_cmp(&d(b)).unwrap()
            })
            .unwrap()
    };
    let (q, s) = (corner(0.0, 0.0), corner(1.0, 1.0));
    let c = admissible_chain(&w, q, s).unwrap();
    let top = c.cubes.iter().map(|&i| w.cubes[i].side).fold(0.0, f64::max);
    assert_eq!(w.cubes[c.central()].side, top);
    assert!(c.eps_achieved >= DEFAULT_EPS_FLOOR, "{}", c.eps_achieved);
    for pair in c.cubes.windows(2) {
        assert!(w.neighbors[pair[0]].contains(&pair[1]));
    }
    let back = admissible_chain(&w, s, q).unwrap();
    assert!((back.eps_achieved - c.eps_achieved).abs() < 1e-12);

    let single = admissible_chain(&w, q, q).unwrap();
    assert_eq!(single.cubes.len(), 1);
    assert_eq!(single.eps_achieved, 0.5);
    let n = w.neighbors[q][0];
    assert_eq!(admissible_chain(&w, q, n).unwrap().cubes.len(), 2);
}

#[test]
fn all_over_constant_falls_as_the_profile_index_rises() {
    // every term carries (l(Q)/D)^{sη} with l(Q)/D < 1; the shadow and chain
    // sums also contain ratios above one and are not monotone in s
    let w = whitney_decompose(&Domain::unit_square(), 6, None).unwrap();
    let exps = ExponentPair::hilbert();
    let mut last = f64::INFINITY;
    for s in [0.25, 0.5, 0.75] {
        let now = lemma_sum_all_over(&w, &KernelProfile::power(s), exps.t1(), &exps).unwrap().constant;
        assert!(now <= last, "s={s}: {now} > {last}");
        last = now;
    }
}

#[test]
fn constant_profile_chain_ratio_is_chain_length() {
    let mut ratios = Vec::new();
    for depth in [5, 7] {
        let w = whitney_decompose(&Domain::unit_square(), depth, None).unwrap();
        let r = lemma_chain_sum(
            &w,
            &KernelProfile::ConstantOne,
            1.0,
            &ExponentPair::hilbert(),
            PairSampling { pairs: 100, seed: 1 },
        )
        .unwrap();
        assert_eq!(r.constant.fract(), 0.0);
        ratios.push(r.constant);
    }
    assert!(ratios[1] > ratios[0], "{ratios:?}");
}

#[test]
fn lemma_reports_are_deterministic_and_depth_stable() {
    let exps = ExponentPair::hilbert();
    let phi = KernelProfile::power(0.5);
    let consts: Vec<[f64; 2]> = [6, 8]
        .iter()
        .map(|&d| {
            let w = whitney_decompose(&Domain::unit_square(), d, None).unwrap();
            let w = w.clone().with_rho(minimal_rho(&w, 200, 0).unwrap().rho);
            [
                lemma_sum_all_over(&w, &phi, 2.0, &exps).unwrap().constant,
                lemma_shadow_sum(&w, &phi, 2.0, &exps).unwrap().constant,
            ]
        })
        .collect();
    for i in 0..2 {
        let change = (consts[1][i] / consts[0][i] - 1.0).abs();
        assert!(change <= 0.15, "lemma {i}: {consts:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_is_one_lipschitz(x in prop::collection::vec(-0.5f64..1.5, 2), y in prop::collection::vec(-0.5f64..1.5, 2)) {
        let dom = Domain::l_shape();
        let gap = (x[0] - y[0]).hypot(x[1] - y[1]);
        let (dx, dy) = (dom.delta(&x), dom.delta(&y));
        prop_assert!((dx - dy).abs() <= gap + 1e-12);
        prop_assert_eq!(dx > 0.0, dom.contains(&x));
    }

    #[test]
    fn long_distance_triangle(a in 0usize..400, b in 0usize..400, c in 0usize..400) {
        let w = whitney_decompose(&Domain::unit_square(), 5, None).unwrap();
        let n = w.len();
        let (q, p, s) = (&w.cubes[a % n], &w.cubes[b % n], &w.cubes[c % n]);
        prop_assert!(long_distance(q, s) <= long_distance(q, p) + long_distance(p, s) + 1e-12);
    }

    #[test]
    fn shadows_grow_with_rho(i in 0usize..1000, r1 in 0.5f64..20.0, extra in 0.0f64..20.0) {
        let w = whitney_decompose(&Domain::unit_square(), 5, None).unwrap();
        let q = i % w.len();
        let small = shadow(&w, q, r1);
        let big = shadow(&w, q, r1 + extra);
        prop_assert!(small.iter().all(|s| big.contains(s)));
    }

    #[test]
    fn sampled_chains_are_admissible(seed in 0u64..1000) {
        let w = whitney_decompose(&Domain::unit_square(), 5, None).unwrap();
        for (q, s) in sample_pairs(&w, 5, seed) {
            let c = admissible_chain(&w, q, s).unwrap();
            prop_assert!(c.eps_achieved > 0.0);
            prop_assert!(c.length(&w) <= long_distance(&w.cubes[q], &w.cubes[s]) / c.eps_achieved * (1.0 + 1e-12));
            let r = c.reversed(&w);
            prop_assert!((r.eps_achieved - c.eps_achieved).abs() < 1e-12);
        }
    }
}

#[test]
fn strip_window_decomposition_is_valid() {
    let win = AaBox::new(vec![-3.0, 0.0], vec![3.0, 1.0]).unwrap();
    let w = whitney_decompose(&Domain::strip(1, 1).unwrap(), 6, Some(&win)).unwrap();
    assert_eq!(verify_whitney(&w).total(), 0);
}
