use proptest::prelude::*;
use seminorm_core::seminorm::{
    comparability_ratio, const_kernel_truncated_bound, exact_const_kernel_full, exact_hilbert_subintegral,
    full_seminorm, hilbert_subintegral_quadrature, seminorm_ladder, strip_effective_kernel, truncated_seminorm,
};
use seminorm_core::{Domain, Error, ExponentPair, Kernel, KernelProfile, QuadratureConfig, TestFunction};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn flat1() -> Kernel {
    Kernel::flat(1, 2.0)
}

fn hilbert() -> ExponentPair {
    ExponentPair::hilbert()
}

#[test]
fn constants_have_zero_seminorms() {
    let cfg = QuadratureConfig::default();
    let c = TestFunction::Constant { c: 3.5 };
    for (dom, k) in [
        (Domain::unit_interval(), Kernel::stable(1, 1.0).unwrap()),
        (Domain::unit_square(), Kernel::stable(2, 0.5).unwrap()),
        (Domain::unit_interval(), flat1()),
    ] {
        let l = seminorm_ladder(&c, &dom, &k, &hilbert(), &[0.5, 1.0], &cfg).unwrap();
        assert_eq!(l.full.value, 0.0);
        assert!(l.truncated.iter().all(|t| t.value == 0.0));
    }
}

#[test]
fn coordinate_with_flat_kernel() {
    let cfg = QuadratureConfig::default();
    let x = TestFunction::Coordinate { axis: 0 };
    let dom = Domain::unit_interval();
    // ∫∫(x-y)² = 1/6 and ∫ (2/3) δ(x)³ dx = 1/48
    let full = full_seminorm(&x, &dom, &flat1(), &hilbert(), &cfg).unwrap();
    assert!(rel(full.value_squared(), 1.0 / 6.0) < 1e-10, "{}", full.value_squared());
    assert!(rel(full.value, 0.408248290463863) < 1e-10);
    let t = truncated_seminorm(&x, &dom, &flat1(), &hilbert(), 1.0, &cfg).unwrap();
    assert!(rel(t.value_squared(), 1.0 / 48.0) < 1e-10, "{}", t.value_squared());
    let r = comparability_ratio(&x, &dom, &flat1(), &hilbert(), 1.0, &cfg).unwrap();
    assert!(rel(r.ratio, 8f64.sqrt()) < 1e-10);
    assert!(!r.infinite);
}

#[test]
fn coordinate_on_the_square_with_flat_kernel() {
    let x = TestFunction::Coordinate { axis: 0 };
    let full =
        full_seminorm(&x, &Domain::unit_square(), &Kernel::flat(2, 2.0), &hilbert(), &QuadratureConfig::planar())
            .unwrap();
    assert!(rel(full.value_squared(), 1.0 / 6.0) < 1e-6, "{}", full.value_squared());
}

#[test]
fn power_with_flat_kernel_matches_closed_forms() {
    let cfg = QuadratureConfig::default();
    let f = TestFunction::PowerGamma { gamma: 0.25 };
    let full = full_seminorm(&f, &Domain::unit_interval(), &flat1(), &hilbert(), &cfg).unwrap();
    assert!(rel(full.value_squared(), 4.0 / 9.0) < 1e-6, "{}", full.value_squared());
    for gamma in [0.1, 0.3, 0.45] {
        for eps in [0.25, 0.5, 1.0] {
            let f = TestFunction::PowerGamma { gamma };
            let t = truncated_seminorm(&f, &Domain::unit_interval(), &flat1(), &hilbert(), eps, &cfg).unwrap();
            let bound = const_kernel_truncated_bound(gamma, eps).unwrap();
            assert!(t.value_squared() <= bound, "γ={gamma}, ε={eps}: {} > {bound}", t.value_squared());
        }
    }
}

#[test]
fn closed_form_values() {
    assert!(exact_const_kernel_full(1e-9).unwrap().abs() < 1e-8);
    assert!(rel(exact_const_kernel_full(0.25).unwrap(), 4.0 / 9.0) < 1e-15);
    assert!(rel(exact_const_kernel_full(0.49).unwrap(), 2.0 * (50.0 - 1.0 / (0.51 * 0.51))) < 1e-13);
    assert!((exact_const_kernel_full(0.49).unwrap() - 92.31).abs() < 1e-2);
    assert!(matches!(exact_const_kernel_full(0.5), Err(Error::Pole(_))));

    assert_eq!(exact_hilbert_subintegral(1.0).unwrap(), 0.0);
    let e = std::f64::consts::E;
    assert!((exact_hilbert_subintegral(e).unwrap() - (3.0 - e)).abs() < 1e-14);
    assert!(rel(exact_hilbert_subintegral(10.0).unwrap(), 11.0 * 10f64.ln() - 18.0) < 1e-14);
    assert!((exact_hilbert_subintegral(10.0).unwrap() - 7.3284).abs() < 1e-4);
    assert!(exact_hilbert_subintegral(0.5).is_err());
    for n in [e, 10.0] {
        let q = hilbert_subintegral_quadrature(n, 12).unwrap();
        assert!(rel(q, exact_hilbert_subintegral(n).unwrap()) < 1e-4);
    }
}

#[test]
fn strip_cross_section_kernel() {
    let far = strip_effective_kernel(0.0, 10.0, 1.0).unwrap();
    assert!((0.9..=1.1).contains(&far.ratio), "{}", far.ratio);
    let a = strip_effective_kernel(0.0, 0.01, 0.5).unwrap().kappa * 0.01f64.powf(1.5);
    let b = strip_effective_kernel(0.0, 0.001, 0.5).unwrap().kappa * 0.001f64.powf(1.5);
    assert!(a > 0.0 && b > 0.0 && rel(a, b) < 0.05, "{a} {b}");
    assert_eq!(
        strip_effective_kernel(0.3, 0.7, 1.2).unwrap().kappa,
        strip_effective_kernel(0.7, 0.3, 1.2).unwrap().kappa
    );
    assert!(strip_effective_kernel(0.3, 0.3, 1.2).is_err());
}

#[test]
fn divergence_is_reported_not_raised() {
    // x^{-0.4} is not in the order-0.75 space of (0,1)
    let f = TestFunction::PowerGamma { gamma: 0.4 };
    let k = Kernel::stable(1, 1.5).unwrap();
    let full = full_seminorm(&f, &Domain::unit_interval(), &k, &hilbert(), &QuadratureConfig::default()).unwrap();
    assert!(full.diverging && full.value.is_infinite(), "{full:?}");
}

#[test]
fn refinement_error_is_reported() {
    let f = TestFunction::GaussianBump { center: vec![0.4], width: 0.2 };
    let k = Kernel::stable(1, 1.0).unwrap();
    let e = full_seminorm(&f, &Domain::unit_interval(), &k, &hilbert(), &QuadratureConfig::default()).unwrap();
    assert!(e.value > 0.0 && e.abs_error.is_finite());
    assert!(e.abs_error <= 1e-4 * e.value, "{e:?}");
    assert!((e.value - e.previous).abs() == e.abs_error);
    assert!(e.evaluations > 0);
}

#[test]
fn test_function_bounds_hold_on_a_grid() {
    let n = 7.0;
    let cr = TestFunction::CappedReciprocal { n };
    let ramp = TestFunction::StripRamp { n };
    let xs: Vec<f64> = (1..2000).map(|i| i as f64 / 2000.0).collect();
    assert!(xs.iter().all(|&x| cr.eval(&[x]) <= n));
    for w in xs.windows(2) {
        let (a, b) = (w[0] * 20.0 - 10.0, w[1] * 20.0 - 10.0);
        assert!((ramp.eval(&[a, 0.5]) - ramp.eval(&[b, 0.5])).abs() <= (b - a) / n + 1e-15);
    }
}

fn function_strategy() -> impl Strategy<Value = TestFunction> {
    prop_oneof![
        Just(TestFunction::Coordinate { axis: 0 }),
        (0.05f64..0.45).prop_map(|gamma| TestFunction::PowerGamma { gamma }),
        (1.0f64..50.0).prop_map(|n| TestFunction::CappedReciprocal { n }),
        (0.1f64..0.9, 0.05f64..0.5).prop_map(|(c, width)| TestFunction::GaussianBump { center: vec![c], width }),
    ]
}

fn coarse() -> QuadratureConfig {
    QuadratureConfig { order: 4, sing_split: 12, boundary_layers: 12, edge_layers: 10, ..QuadratureConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn regions_are_nested(f in function_strategy(), a in 0.05f64..0.5, b in 0.5f64..1.0, alpha in 0.2f64..1.8) {
        let k = Kernel::stable(1, alpha).unwrap();
        let l = seminorm_ladder(&f, &Domain::unit_interval(), &k, &hilbert(), &[a, b], &coarse()).unwrap();
        prop_assert!(l.is_region_monotone(), "{:?}", l);
        prop_assert!(l.truncated[0].value <= l.truncated[1].value);
        prop_assert!(l.truncated[1].value <= l.full.value);
    }

    #[test]
    fn seminorms_are_homogeneous(f in function_strategy(), c in -5.0f64..5.0, alpha in 0.2f64..1.8) {
        prop_assume!(c.abs() > 1e-3);
        let k = Kernel::stable(1, alpha).unwrap();
        let g = TestFunction::Scaled { inner: Box::new(f.clone()), factor: c };
        let a = seminorm_ladder(&f, &Domain::unit_interval(), &k, &hilbert(), &[0.5], &coarse()).unwrap();
        let b = seminorm_ladder(&g, &Domain::unit_interval(), &k, &hilbert(), &[0.5], &coarse()).unwrap();
        prop_assume!(!a.full.diverging);
        prop_assert!(rel(b.full.value, c.abs() * a.full.value) < 1e-12);
        prop_assert!(rel(b.truncated[0].value, c.abs() * a.truncated[0].value) < 1e-12);
    }

    #[test]
    fn seminorms_are_translation_invariant(t in -3.0f64..3.0, center in 0.2f64..0.8, width in 0.1f64..0.4) {
        let f = TestFunction::GaussianBump { center: vec![center], width };
        let g = TestFunction::Shifted { inner: Box::new(f.clone()), offset: vec![t] };
        let k = Kernel::stable(1, 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        let a = seminorm_ladder(&f, &Domain::unit_interval(), &k, &hilbert(), &[0.5], &cfg).unwrap();
        let b = seminorm_ladder(&g, &Domain::interval(t, 1.0 + t).unwrap(), &k, &hilbert(), &[0.5], &cfg).unwrap();
        prop_assert!(rel(b.full.value, a.full.value) < 1e-6);
        prop_assert!(rel(b.truncated[0].value, a.truncated[0].value) < 1e-6);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn planar_regions_are_nested(cx in 0.2f64..0.8, cy in 0.2f64..0.8, alpha in 0.3f64..1.7) {
        let f = TestFunction::GaussianBump { center: vec![cx, cy], width: 0.3 };
        let k = Kernel::stable(2, alpha).unwrap();
        let cfg = QuadratureConfig { max_refine: 1, ..QuadratureConfig::planar() };
        let l = seminorm_ladder(&f, &Domain::unit_square(), &k, &hilbert(), &[0.25, 1.0], &cfg).unwrap();
        prop_assert!(l.is_region_monotone());
    }
}

#[test]
fn kernel_dimension_must_match() {
    let x = TestFunction::Coordinate { axis: 0 };
    let k = Kernel::new(2, 2.0, KernelProfile::power(0.5)).unwrap();
    assert!(full_seminorm(&x, &Domain::unit_interval(), &k, &hilbert(), &QuadratureConfig::default()).is_err());
    assert!(truncated_seminorm(&x, &Domain::unit_interval(), &flat1(), &hilbert(), 1.5, &QuadratureConfig::default())
        .is_err());
}
