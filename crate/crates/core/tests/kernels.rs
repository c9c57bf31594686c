use proptest::prelude::*;
use seminorm_core::kernels::{
    audit, check_a1, check_a2, check_a3, check_strip_tail, default_r_grid, estimate_both, estimate_matuszewska_lower,
    geomspace, kernel_eval, phi_eval, AuditConfig, End,
};
use seminorm_core::{ExponentPair, Kernel, KernelProfile};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Composite midpoint rule; never evaluates the endpoints.
fn midpoint(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

#[test]
fn documented_phi_and_kernel_values() {
    assert_eq!(phi_eval(&KernelProfile::power(0.5), 4.0).unwrap(), 2.0);
    assert_eq!(phi_eval(&KernelProfile::ConstantOne, 1e-3).unwrap(), 1.0);
    let e1 = std::f64::consts::E - 1.0;
    assert!((phi_eval(&KernelProfile::Log1pPower { gamma: 0.5 }, e1).unwrap() - 1.0).abs() < 1e-15);
    assert!(phi_eval(&KernelProfile::power(0.5), 0.0).is_err());

    let k = Kernel::new(1, 2.0, KernelProfile::power(0.5)).unwrap();
    assert_eq!(kernel_eval(&k, &[0.0], &[1.0]).unwrap(), 1.0);
    let k = Kernel::new(2, 2.0, KernelProfile::power(0.25)).unwrap();
    let v = kernel_eval(&k, &[0.0, 0.0], &[0.0, 1.0 / 16.0]).unwrap();
    assert!(rel(v, 1024.0) < 1e-13, "{v}");
    assert!(rel(v, (1.0f64 / 16.0).powf(-2.5)) < 1e-13);
    let k = Kernel::new(1, 2.0, KernelProfile::ConstantOne).unwrap();
    assert_eq!(kernel_eval(&k, &[0.25], &[0.75]).unwrap(), 2.0);
    assert!(kernel_eval(&k, &[0.25], &[0.25]).is_err());
}

#[test]
fn a1_matches_brute_force_quadrature() {
    // ∫(1∧y²)|y|^{-1}φ(|y|)^{-2} dy with φ = r^{1/4}; substitute y = t² near
    // 0 and y = t^{-2} far out so both integrands are smooth
    let g = |y: f64| y.powi(2).min(1.0) / y * y.powf(0.25).powi(-2);
    let near = midpoint(0.0, 1.0, 20000, |t| g(t * t) * 2.0 * t);
    let far = midpoint(0.0, 1.0, 20000, |t| g(t.powi(-2)) * 2.0 * t.powi(-3));
    let oracle = 2.0 * (near + far);
    let k = Kernel::stable(1, 0.5).unwrap();
    let a1 = check_a1(&k, 1e6);
    assert!(a1.pass);
    assert!(rel(a1.value, oracle) < 1e-6, "{} vs {oracle}", a1.value);
}

#[test]
fn a1_constant_profile_near_part_and_endpoint_divergence() {
    let k = Kernel::new(1, 2.0, KernelProfile::ConstantOne).unwrap();
    let a1 = check_a1(&k, 1e6);
    // the radial part ∫₀¹ r² r^{-1} r^{-1} dr
    assert!((a1.near.value() - 1.0).abs() < 1e-12, "{}", a1.near.value());
    let k = Kernel::new(1, 2.0, KernelProfile::power(1.0)).unwrap();
    let a1 = check_a1(&k, 1e6);
    assert!(!a1.pass && !a1.near.finite);
}

#[test]
fn a2_log_profile_matches_direct_summation() {
    let k = Kernel::new(1, 2.0, KernelProfile::Log1pPower { gamma: 0.5 }).unwrap();
    let exps = ExponentPair::hilbert();
    let grid = default_r_grid(Some(1.0));
    let r200 = check_a2(&k, &exps, Some(1.0), &grid, 200, 1e6).unwrap();
    let r400 = check_a2(&k, &exps, Some(1.0), &grid, 400, 1e6).unwrap();
    assert!(r200.pass && r400.pass);
    assert!((r200.constant - r400.constant).abs() < 1e-8);

    let phi = |r: f64| (r.ln_1p()).sqrt();
    let mut sup: f64 = 0.0;
    for &r in &grid {
        let mut s1 = 0.0;
        let mut k = 1;
        while 2f64.powi(k) * r <= 1.0 {
            s1 += phi(r) / phi(2f64.powi(k) * r);
            k += 1;
        }
        let s2: f64 = (1..=400).map(|k| phi(2f64.powi(-k) * r) / phi(r)).sum();
        sup = sup.max(s1).max(s2);
    }
    assert!(rel(r400.constant, sup) < 1e-8, "{} vs {sup}", r400.constant);
}

#[test]
fn a2_constant_profile_fails_on_unbounded_domains() {
    let k = Kernel::new(1, 2.0, KernelProfile::ConstantOne).unwrap();
    let r = check_a2(&k, &ExponentPair::hilbert(), None, &default_r_grid(None), 64, 1e6).unwrap();
    assert!(!r.pass);
}

#[test]
fn a2_stable_is_stable_under_doubling_the_cutoff() {
    let k = Kernel::stable(1, 1.0).unwrap();
    let exps = ExponentPair::hilbert();
    let grid = default_r_grid(None);
    let a = check_a2(&k, &exps, None, &grid, 64, 1e6).unwrap();
    let b = check_a2(&k, &exps, None, &grid, 128, 1e6).unwrap();
    assert!((a.constant - b.constant).abs() <= a.tail_bound.max(1e-15));
    assert!(rel(b.constant, 1.0 / (2f64.sqrt() - 1.0)) < 1e-12);
}

#[test]
fn a3_documented_constants() {
    let grid = default_r_grid(Some(1.0));
    let c = check_a3(&KernelProfile::power(0.5), Some(1.0), &grid, 1e3).unwrap().constant;
    assert!(rel(c, 2f64.sqrt()) < 1e-14);
    assert_eq!(check_a3(&KernelProfile::ConstantOne, Some(1.0), &grid, 1e3).unwrap().constant, 1.0);
    for gamma in [0.25, 0.5, 0.9] {
        let c = check_a3(&KernelProfile::Log1pPower { gamma }, Some(1.0), &grid, 1e3).unwrap().constant;
        assert!(c <= 2f64.powf(gamma) && c >= 2f64.powf(gamma) * (1.0 - 1e-5), "{gamma}: {c}");
    }
}

#[test]
fn matuszewska_documented_indices() {
    let m = estimate_both(&KernelProfile::power(0.7)).unwrap();
    assert!((m.lower_index_at_zero.lower_index - 0.7).abs() < 1e-10);
    assert!((m.lower_index_at_infinity.lower_index - 0.7).abs() < 1e-10);
    let m = estimate_both(&KernelProfile::ConstantOne).unwrap();
    assert_eq!(m.lower_index_at_zero.lower_index, 0.0);

    // log(1+r) ~ r near 0, slowly varying at infinity
    let log = KernelProfile::Log1pPower { gamma: 0.5 };
    let z = estimate_matuszewska_lower(&log, End::Zero, &geomspace(1e-8, 1e-4, 16)).unwrap();
    assert!((z.lower_index - 0.5).abs() < 1e-4, "{}", z.lower_index);
    let inf = estimate_matuszewska_lower(&log, End::Infinity, &geomspace(1e60, 1e120, 16)).unwrap();
    assert!(inf.lower_index.abs() < 5e-3, "{}", inf.lower_index);
}

#[test]
fn audit_stable_kernels_and_non_monotone_profiles() {
    let exps = ExponentPair::hilbert();
    for alpha in [0.5, 1.0, 1.5] {
        let r = audit(&Kernel::stable(1, alpha).unwrap(), &exps, Some(1.0), &AuditConfig::default()).unwrap();
        assert!(r.pass.iter().all(|&p| p));
        assert!(r.a3.constant >= 1.0);
    }
    let k = Kernel::new(1, 2.0, KernelProfile::InvLogPower { beta: 1.0 }).unwrap();
    assert!(audit(&k, &exps, Some(1.0), &AuditConfig::default()).is_err());
}

#[test]
fn strip_tail_condition_separates_orders() {
    // Σ_n ∫_{|x|>n} |x|^{-2-α} dx over the plane is finite iff α > 1
    assert!(check_strip_tail(&Kernel::stable(2, 1.5).unwrap(), 1e12).finite);
    assert!(!check_strip_tail(&Kernel::stable(2, 0.5).unwrap(), 1e12).finite);
    // in the plane ∫_{|x|>1}(⌈|x|⌉-1)|x|^{-3.5} dx is below 2π∫_1^∞ r^{-1.5} dr = 4π
    let v = check_strip_tail(&Kernel::stable(2, 1.5).unwrap(), 1e12).value();
    assert!(v > 0.0 && v < 4.0 * std::f64::consts::PI, "{v}");
}

#[test]
fn exponent_pair_rules() {
    let e = ExponentPair::new(3.0, 2.0).unwrap();
    assert_eq!(e.t1(), 1.5_f64.min(2.0));
    assert_eq!(e.t2(), 1.0);
    assert_eq!(e.p_conj(), 1.5);
    let e = ExponentPair::new(2.5, 2.5).unwrap();
    assert_eq!(e.t1(), 1.5);
    assert!(ExponentPair::new(2.0, 3.0).is_err());
    assert!(ExponentPair::new(2.0, 1.0).is_err());
}

fn profile_strategy() -> impl Strategy<Value = KernelProfile> {
    prop_oneof![
        (0.05f64..1.5, 0.1f64..10.0).prop_map(|(exponent, scale)| KernelProfile::Power { exponent, scale }),
        (0.05f64..0.95).prop_map(|gamma| KernelProfile::Log1pPower { gamma }),
        Just(KernelProfile::ConstantOne),
        (0.1f64..3.0).prop_map(|beta| KernelProfile::InvLogPower { beta }),
    ]
}

proptest! {
    #[test]
    fn kernel_is_symmetric(profile in profile_strategy(), x in prop::collection::vec(-5.0f64..5.0, 2), y in prop::collection::vec(-5.0f64..5.0, 2)) {
        prop_assume!(x != y);
        let k = Kernel::new(2, 2.0, profile).unwrap();
        prop_assert_eq!(kernel_eval(&k, &x, &y).unwrap(), kernel_eval(&k, &y, &x).unwrap());
    }

    #[test]
    fn profiles_are_positive(profile in profile_strategy(), r in 1e-9f64..1e9) {
        prop_assert!(phi_eval(&profile, r).unwrap() > 0.0);
    }

    #[test]
    fn profile_json_round_trip(profile in profile_strategy()) {
        let text = serde_json::to_string(&profile).unwrap();
        let back: KernelProfile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, profile);
    }

    #[test]
    fn doubling_bounds_nearby_values(gamma in 0.05f64..0.95, r1 in 1e-6f64..1.0, t in 0.0f64..1.0) {
        let p = KernelProfile::Log1pPower { gamma };
        let grid = default_r_grid(Some(1.0));
        let c3 = check_a3(&p, Some(1.0), &grid, 1e3).unwrap().constant;
        let r2 = r1 * (1.0 + t);
        prop_assert!(phi_eval(&p, r2).unwrap() <= c3 * phi_eval(&p, r1).unwrap() * (1.0 + 1e-12));
    }
}
