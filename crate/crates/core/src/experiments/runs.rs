use rayon::prelude::*;
use serde_json::Value;

use super::params::Params;
use super::{Check, Trend};
use crate::error::{Error, Result};
use crate::geometry::{
    lemma_chain_sum, lemma_shadow_sum, lemma_sum_all_over, minimal_rho, verify_whitney, whitney_decompose, Domain,
    PairSampling,
};
use crate::harmonic::{cosine_log_integrals, step3_counterexample, step3_index, weighted_sum, FourierWeight};
use crate::kernels::{audit, check_strip_tail, estimate_both, AuditConfig, ExponentPair, Kernel, KernelProfile};
use crate::seminorm::{
    const_kernel_truncated_bound, exact_const_kernel_full, exact_hilbert_subintegral, hilbert_subintegral_quadrature,
    seminorm_ladder, strip_full_by_cross_section, truncated_seminorm, QuadratureConfig, TestFunction,
};

pub(super) struct Table {
    pub rows: Vec<Vec<Value>>,
    pub checks: Vec<Check>,
}

pub(super) fn run(name: &str, p: &mut Params, seed: u64) -> Result<Table> {
    match name {
        "kernel-audit" => kernel_audit(p),
        "uniform-square-ratio" => uniform_square(p),
        "const-kernel-blowup" => const_kernel(p),
        "hilbert-kernel-blowup" => hilbert_kernel(p),
        "strip-1d" => strip_1d(p),
        "strip-kl" => strip_kl(p),
        "zero-order-log" => zero_order(p),
        "whitney-lemmas" => whitney_lemmas(p, seed),
        other => Err(Error::UnknownExperiment(other.to_string())),
    }
}

/// JSON number, `"inf"`/`"-inf"` for infinities, null for NaN.
fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

fn text(s: impl Into<String>) -> Value {
    Value::from(s.into())
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), pass, detail: detail.into(), required: true }
}

fn advisory(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), pass, detail: detail.into(), required: false }
}

fn region_check(ok: bool) -> Check {
    check("region_monotone", ok, "truncated(θ₁) <= truncated(θ₂) <= full on shared nodes for every ladder")
}

fn increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn check_alpha(p: &Params, key: &str, a: f64) -> Result<()> {
    p.ensure(a > 0.0 && a < 2.0, key, "stable orders must lie in (0, 2)")
}

fn check_ladder(p: &Params, key: &str, ns: &[f64]) -> Result<()> {
    p.ensure(
        increasing(ns) && ns[0] >= 1.0 && ns.iter().all(|n| n.is_finite()),
        key,
        "values must be finite, >= 1 and increasing",
    )
}

fn check_theta(p: &Params, key: &str, t: f64) -> Result<()> {
    p.ensure(t > 0.0 && t <= 1.0, key, "θ must lie in (0, 1]")
}

fn max_over_min(v: &[f64]) -> f64 {
    let (lo, hi) = v.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    hi / lo
}

fn kernel_audit(p: &mut Params) -> Result<Table> {
    let d = p.usize("d")?;
    p.ensure(d >= 1, "d", "dimension must be at least 1")?;
    let (pp, q) = (p.f64("p")?, p.f64("q")?);
    let exps = ExponentPair::new(pp, q).map_err(|e| Error::BadParam { key: "p".into(), reason: e.to_string() })?;
    let diam = p.f64("diam")?;
    p.ensure(diam >= 0.0 && diam.is_finite(), "diam", "diameter must be finite and >= 0")?;
    let diam = (diam > 0.0).then_some(diam);
    let alphas = p.f64_list("alphas")?;
    for &a in &alphas {
        check_alpha(p, "alphas", a)?;
    }
    let hilbert = pp == 2.0 && q == 2.0;
    let mut zoo: Vec<(KernelProfile, Option<f64>)> =
        alphas.iter().map(|&a| (KernelProfile::stable(a), Some(a))).collect();
    zoo.push((KernelProfile::Log1pPower { gamma: 0.5 }, None));
    zoo.push((KernelProfile::Power { exponent: 0.25, scale: 2.0 }, None));
    zoo.push((KernelProfile::ConstantOne, None));
    zoo.push((KernelProfile::InvLogPower { beta: 1.0 }, None));

    let rows: Vec<(Vec<Value>, Option<(f64, f64)>, Option<(f64, bool, bool, f64)>)> = zoo
        .par_iter()
        .map(|(profile, alpha)| {
            let kernel = Kernel::new(d, q, profile.clone()).expect("zoo profiles are valid");
            let expected = alpha.filter(|_| hilbert).map(|a| 1.0 / (2f64.powf(a / 2.0) - 1.0));
            let tail = check_strip_tail(&kernel, 1e12).value();
            let indices = estimate_both(profile).ok();
            let (lz, li) = indices
                .as_ref()
                .map(|m| (m.lower_index_at_zero.lower_index, m.lower_index_at_infinity.lower_index))
                .unwrap_or((f64::NAN, f64::NAN));
            match audit(&kernel, &exps, diam, &AuditConfig::default()) {
                Ok(r) => {
                    let row = vec![
                        text(profile.label()),
                        num(r.a1.value),
                        num(r.a2.constant),
                        expected.map(num).unwrap_or(Value::Null),
                        num(r.a3.constant),
                        Value::from(r.pass[0]),
                        Value::from(r.pass[1]),
                        Value::from(r.pass[2]),
                        num(lz),
                        num(li),
                        num(tail),
                        text(""),
                    ];
                    (row, expected.map(|e| (r.a2.constant, e)), Some((r.a3.constant, r.pass[1], r.pass[2], lz)))
                }
                Err(e) => {
                    let mut row = vec![text(profile.label())];
                    row.extend(std::iter::repeat_n(Value::Null, 7));
                    row.extend([num(lz), num(li), num(tail), text(e.to_string())]);
                    (row, None, None)
                }
            }
        })
        .collect();

    let mut checks = Vec::new();
    let stable: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.1).collect();
    if !stable.is_empty() {
        let worst = stable.iter().map(|(c, e)| ((c - e) / e).abs()).fold(0.0, f64::max);
        checks.push(check("c2_closed_form", worst <= 1e-12, format!("largest relative deviation {worst:e}")));
        let bounded = stable.iter().all(|(c, e)| *c <= e + 1e-9);
        checks.push(check("c2_bounded", bounded, "every stable C2 is at most 1/(2^{α/2}-1) + 1e-9"));
    }
    let audited: Vec<(f64, bool, bool, f64)> = rows.iter().filter_map(|r| r.2).collect();
    let a3 = audited.iter().all(|a| a.0 >= 1.0);
    checks.push(check("c3_at_least_one", a3, "φ(2r)/φ(r) >= 1 for the monotone profiles"));
    if diam.is_some() {
        let floor = audited.iter().filter(|a| a.1 && a.2).all(|a| a.3 >= 0.01);
        checks.push(check(
            "matuszewska_floor",
            floor,
            "profiles passing A2 and A3 have lower index at 0 at least 0.01",
        ));
    }
    Ok(Table { rows: rows.into_iter().map(|r| r.0).collect(), checks })
}

/// The planar suite for order `α`: smooth functions, two bumps and two
/// boundary powers `x^s` with `s` tied to `α` so the seminorm is finite.
pub(crate) fn planar_suite(alpha: f64) -> Vec<TestFunction> {
    vec![
        TestFunction::Coordinate { axis: 0 },
        TestFunction::CoordinateProduct,
        TestFunction::GaussianBump { center: vec![0.5, 0.5], width: 0.3 },
        TestFunction::GaussianBump { center: vec![0.2, 0.7], width: 0.1 },
        TestFunction::AxisPower { axis: 0, exponent: alpha / 2.0 },
        TestFunction::AxisPower { axis: 1, exponent: 0.5 + alpha / 4.0 },
    ]
}

fn uniform_square(p: &mut Params) -> Result<Table> {
    let alphas = p.f64_list("alphas")?;
    for &a in &alphas {
        check_alpha(p, "alphas", a)?;
    }
    let thetas = p.f64_list("thetas")?;
    p.ensure(
        increasing(&thetas) && thetas[0] > 0.0 && thetas[thetas.len() - 1] <= 1.0,
        "thetas",
        "θ values must increase within (0, 1]",
    )?;
    let work: Vec<(f64, TestFunction)> =
        alphas.iter().flat_map(|&a| planar_suite(a).into_iter().map(move |f| (a, f))).collect();
    let cfg = QuadratureConfig::planar();
    let exps = ExponentPair::hilbert();
    let results: Vec<_> = work
        .par_iter()
        .map(|(a, f)| {
            let kernel = Kernel::stable(2, *a).expect("checked order");
            seminorm_ladder(f, &Domain::unit_square(), &kernel, &exps, &thetas, &cfg).map(|l| (*a, f.label(), l))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    // (alpha, theta index) -> (ratio, previous ratio, finite)
    let mut stats: Vec<(f64, usize, f64, f64, bool)> = Vec::new();
    for (a, label, l) in &results {
        for (k, t) in l.truncated.iter().enumerate() {
            let ratio = l.full.value / t.value;
            let prev = l.full.previous / t.previous;
            let finite = ratio.is_finite() && !l.full.diverging && !t.diverging;
            rows.push(vec![
                num(*a),
                text(label.clone()),
                num(thetas[k]),
                num(l.full.value_squared()),
                num(t.value_squared()),
                num(ratio),
                num(prev),
                Value::from(l.full.low_confidence || t.low_confidence),
            ]);
            stats.push((*a, k, ratio, prev, finite));
        }
    }
    let all_finite = stats.iter().all(|s| s.4);
    let monotone = results.iter().all(|r| r.2.is_region_monotone());
    let mut order_ok = true;
    let mut stable_ok = true;
    let mut details = Vec::new();
    for &a in &alphas {
        let suite_max = |k: usize, prev: bool| {
            stats.iter().filter(|s| s.0 == a && s.1 == k).map(|s| if prev { s.3 } else { s.2 }).fold(0.0, f64::max)
        };
        let maxes: Vec<f64> = (0..thetas.len()).map(|k| suite_max(k, false)).collect();
        order_ok &= maxes.windows(2).all(|w| w[0] >= w[1]);
        for (k, &m) in maxes.iter().enumerate() {
            let prev = suite_max(k, true);
            stable_ok &= (m - prev).abs() <= 0.25 * prev;
        }
        details.push(format!("α={a}: suite max {maxes:?}"));
    }
    let checks = vec![
        check("ratios_finite", all_finite, "every full/truncated ratio is finite"),
        check("suite_max_decreasing_in_theta", order_ok, details.join("; ")),
        check("suite_max_refinement_stable", stable_ok, "suite max moves by at most 25% between refinement levels"),
        region_check(monotone),
    ];
    Ok(Table { rows, checks })
}

fn const_kernel(p: &mut Params) -> Result<Table> {
    let gammas = p.f64_list("gammas")?;
    p.ensure(
        increasing(&gammas) && gammas[0] > 0.0 && gammas[gammas.len() - 1] < 0.5,
        "gammas",
        "γ values must increase within (0, 1/2)",
    )?;
    let eps = p.f64("eps")?;
    p.ensure(eps > 0.0 && eps < 1.0, "eps", "ε must lie in (0, 1)")?;
    let kernel = Kernel::flat(1, 2.0);
    let exps = ExponentPair::hilbert();
    let cfg = QuadratureConfig::default();
    let rows: Vec<(Vec<Value>, f64, f64, f64, bool)> = gammas
        .par_iter()
        .map(|&g| {
            let f = TestFunction::PowerGamma { gamma: g };
            let l = seminorm_ladder(&f, &Domain::unit_interval(), &kernel, &exps, &[eps], &cfg)?;
            let exact = exact_const_kernel_full(g)?;
            let bound = const_kernel_truncated_bound(g, eps)?;
            let trunc = &l.truncated[0];
            let closed = (exact / bound).sqrt();
            let row = vec![
                num(g),
                num(exact),
                num(l.full.value_squared()),
                num(bound),
                num(trunc.value_squared()),
                num(closed),
                num(l.full.value / trunc.value),
            ];
            Ok((
                row,
                closed,
                trunc.value_squared() / bound,
                (l.full.value_squared() / exact - 1.0).abs(),
                l.is_region_monotone(),
            ))
        })
        .collect::<Result<_>>()?;
    let closed: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let growth = closed[closed.len() - 1] / closed[0];
    let under = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let dev = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    let checks = vec![
        check("ratio_increasing", increasing(&closed), format!("{closed:?}")),
        check("ratio_growth", growth >= 3.0, format!("last/first = {growth:.4}")),
        check("truncated_below_bound", under <= 1.0 + 1e-9, format!("largest trunc2/bound = {under:.6}")),
        check("full_matches_closed_form", dev <= 1e-4, format!("largest relative deviation {dev:e}")),
        region_check(rows.iter().all(|r| r.4)),
    ];
    Ok(Table { rows: rows.into_iter().map(|r| r.0).collect(), checks })
}

fn hilbert_kernel(p: &mut Params) -> Result<Table> {
    let ns = p.f64_list("ns")?;
    check_ladder(p, "ns", &ns)?;
    let theta = p.f64("theta")?;
    check_theta(p, "theta", theta)?;
    let kernel = Kernel::new(1, 2.0, KernelProfile::ConstantOne)?;
    let exps = ExponentPair::hilbert();
    let cfg = QuadratureConfig::default();
    let rows: Vec<(Vec<Value>, f64, f64, bool)> = ns
        .par_iter()
        .map(|&n| {
            let f = TestFunction::CappedReciprocal { n };
            let l = seminorm_ladder(&f, &Domain::unit_interval(), &kernel, &exps, &[theta], &cfg)?;
            let t = &l.truncated[0];
            let ratio2 = l.full.value_squared() / t.value_squared();
            let exact = exact_hilbert_subintegral(n)?;
            let quad = hilbert_subintegral_quadrature(n, 12)?;
            let dev = if exact > 0.0 { (quad / exact - 1.0).abs() } else { quad.abs() };
            let row = vec![
                num(n),
                num(l.full.value_squared()),
                num(t.value_squared()),
                num(ratio2),
                num(exact),
                num(quad),
                Value::from(l.full.low_confidence || t.low_confidence),
            ];
            Ok((row, ratio2, dev, l.is_region_monotone()))
        })
        .collect::<Result<_>>()?;
    let r2: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let growth = r2[r2.len() - 1] / r2[0];
    let dev = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let checks = vec![
        check("ratio2_increasing", increasing(&r2), format!("{r2:?}")),
        check("ratio2_growth", growth >= 1.5, format!("last/first = {growth:.4}")),
        check("subintegral_matches", dev <= 1e-3, format!("largest relative deviation {dev:e}")),
        region_check(rows.iter().all(|r| r.3)),
    ];
    Ok(Table { rows: rows.into_iter().map(|r| r.0).collect(), checks })
}

struct StripPoint {
    full2: f64,
    trunc2: f64,
    cross: f64,
    low_confidence: bool,
    monotone: bool,
}

fn strip_point(kernel: &Kernel, l: usize, n: f64, theta: f64) -> Result<StripPoint> {
    let f = TestFunction::StripRamp { n };
    let cfg = QuadratureConfig::strip();
    let lad = seminorm_ladder(&f, &Domain::Strip { k: 1, l }, kernel, &ExponentPair::hilbert(), &[theta], &cfg)?;
    let cross = if l == 1 { strip_full_by_cross_section(&f, kernel, 2.0, l, &cfg)?.0 } else { f64::NAN };
    let t = &lad.truncated[0];
    Ok(StripPoint {
        full2: lad.full.value_squared(),
        trunc2: t.value_squared(),
        cross,
        low_confidence: lad.full.low_confidence || t.low_confidence,
        monotone: lad.is_region_monotone(),
    })
}

/// Expected trend on `R × (0,1)^l`: comparable when `1 - l - α < -1`,
/// growing when `α < 1` and `1 - l - α > -1`.
fn expected_trend(l: usize, alpha: f64) -> Option<Trend> {
    let s = 1.0 - l as f64 - alpha;
    if s < -1.0 {
        Some(Trend::Bounded)
    } else if alpha < 1.0 && s > -1.0 {
        Some(Trend::Growing)
    } else {
        None
    }
}

fn strip_1d(p: &mut Params) -> Result<Table> {
    let alpha = p.f64("alpha")?;
    check_alpha(p, "alpha", alpha)?;
    let ns = p.f64_list("ns")?;
    check_ladder(p, "ns", &ns)?;
    let theta = p.f64("theta")?;
    check_theta(p, "theta", theta)?;
    let kernel = Kernel::stable(2, alpha)?;
    let points: Vec<StripPoint> = ns.par_iter().map(|&n| strip_point(&kernel, 1, n, theta)).collect::<Result<_>>()?;
    let r2: Vec<f64> = points.iter().map(|s| s.full2 / s.trunc2).collect();
    let rows = ns
        .iter()
        .zip(&points)
        .zip(&r2)
        .map(|((&n, s), &r)| {
            vec![num(n), num(s.full2), num(s.trunc2), num(r), num(s.cross), Value::from(s.low_confidence)]
        })
        .collect();
    let tail_finite = check_strip_tail(&kernel, 1e12).finite;
    let expected = if tail_finite { Some(Trend::Bounded) } else { expected_trend(1, alpha) };
    let observed = Trend::of(&r2);
    let mut checks = Vec::new();
    match expected {
        Some(e) => checks.push(check(
            "trend_matches",
            observed == e,
            format!(
                "observed {}, expected {} (tail condition {})",
                observed.label(),
                e.label(),
                if tail_finite { "holds" } else { "fails" }
            ),
        )),
        None => checks.push(advisory(
            "trend_matches",
            true,
            format!("observed {}; no settled expectation", observed.label()),
        )),
    }
    if alpha < 1.0 {
        if let (Some(i), Some(j)) = (ns.iter().position(|&n| n == 8.0), ns.iter().position(|&n| n == 32.0)) {
            let g = r2[j] / r2[i];
            checks.push(check("growth_8_to_32", (1.5..=3.0).contains(&g), format!("ratio2(32)/ratio2(8) = {g:.4}")));
        }
    }
    let dev = points.iter().map(|s| (s.full2 / s.cross - 1.0).abs()).fold(0.0, f64::max);
    checks.push(check("cross_section_agrees", dev <= 1e-2, format!("largest relative deviation {dev:e}")));
    checks.push(region_check(points.iter().all(|s| s.monotone)));
    Ok(Table { rows, checks })
}

fn strip_kl(p: &mut Params) -> Result<Table> {
    let cases = p.tuples("cases", 3)?;
    for c in &cases {
        p.ensure(c[0] == 1.0, "cases", "only strips with one unbounded axis (k = 1) are implemented")?;
        p.ensure(c[1] == 1.0 || c[1] == 2.0, "cases", "l must be 1 or 2")?;
        check_alpha(p, "cases", c[2])?;
    }
    let ns = p.f64_list("ns")?;
    check_ladder(p, "ns", &ns)?;
    let theta = p.f64("theta")?;
    check_theta(p, "theta", theta)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut monotone = true;
    for c in &cases {
        let (k, l, alpha) = (c[0] as usize, c[1] as usize, c[2]);
        let kernel = Kernel::stable(l + 1, alpha)?;
        let points: Vec<StripPoint> =
            ns.par_iter().map(|&n| strip_point(&kernel, l, n, theta)).collect::<Result<_>>()?;
        let r2: Vec<f64> = points.iter().map(|s| s.full2 / s.trunc2).collect();
        monotone &= points.iter().all(|s| s.monotone);
        let observed = Trend::of(&r2);
        let expected = expected_trend(l, alpha);
        let exp_label = expected.map(|e| e.label()).unwrap_or("unsettled");
        for (&n, &r) in ns.iter().zip(&r2) {
            rows.push(vec![
                Value::from(k),
                Value::from(l),
                num(alpha),
                num(k as f64 - l as f64 - alpha),
                num(n),
                num(r),
                text(observed.label()),
                text(exp_label),
            ]);
        }
        let name = format!("case_{k}_{l}_{alpha}");
        let detail = format!("observed {}, expected {exp_label}, ratio2 {r2:?}", observed.label());
        match expected {
            Some(e) => checks.push(check(&name, observed == e, detail)),
            None => checks.push(advisory(&name, true, detail)),
        }
    }
    checks.push(region_check(monotone));
    Ok(Table { rows, checks })
}

fn zero_order(p: &mut Params) -> Result<Table> {
    let ns = p.f64_list("ns")?;
    check_ladder(p, "ns", &ns)?;
    let theta = p.f64("theta")?;
    check_theta(p, "theta", theta)?;
    let fourier_n = p.usize("fourier_n")?;
    p.ensure(fourier_n >= 2, "fourier_n", "n must be at least 2")?;
    let levels = p.usize_list("levels")?;
    p.ensure(
        levels.len() == 2 && levels[0] >= 1 && levels[0] < levels[1],
        "levels",
        "two increasing level counts >= 1",
    )?;
    let ms = p.usize_list("ms")?;
    p.ensure(!ms.is_empty() && ms.iter().all(|&m| m >= 2), "ms", "frequencies must be at least 2")?;

    let mut rows = Vec::new();
    let mut checks = Vec::new();

    // log-corrected truncation versus the plain one along n ∧ 1/x
    let exps = ExponentPair::hilbert();
    let cfg = QuadratureConfig::default();
    let plain = Kernel::new(1, 2.0, KernelProfile::ConstantOne)?;
    let corrected = Kernel::new(1, 2.0, KernelProfile::InvLogPower { beta: 1.0 })?;
    let forward: Vec<(f64, f64, f64, bool)> = ns
        .par_iter()
        .map(|&n| {
            let f = TestFunction::CappedReciprocal { n };
            let l = seminorm_ladder(&f, &Domain::unit_interval(), &plain, &exps, &[theta], &cfg)?;
            let tl = truncated_seminorm(&f, &Domain::unit_interval(), &corrected, &exps, theta, &cfg)?;
            let full2 = l.full.value_squared();
            Ok((full2, full2 / l.truncated[0].value_squared(), full2 / tl.value_squared(), l.is_region_monotone()))
        })
        .collect::<Result<_>>()?;
    for (&n, r) in ns.iter().zip(&forward) {
        rows.push(vec![text("forward"), num(n), num(r.0), num(r.1), num(r.2)]);
    }
    let plain_r: Vec<f64> = forward.iter().map(|r| r.1).collect();
    let log_r: Vec<f64> = forward.iter().map(|r| r.2).collect();
    checks.push(check("log_corrected_bounded", Trend::of(&log_r) == Trend::Bounded, format!("{log_r:?}")));
    checks.push(check("plain_growing", Trend::of(&plain_r) == Trend::Growing, format!("{plain_r:?}")));
    checks.push(region_check(forward.iter().all(|r| r.3)));

    // the two characterizing sums of the lacunary series
    let n = fourier_n as u32;
    let top = levels[1] as u32;
    let series = step3_counterexample(n, top + 1)?;
    let cutoffs: Vec<_> =
        levels.iter().flat_map(|&l| [step3_index(n, l as u32), step3_index(n, l as u32 + 1)]).collect();
    let s1 = weighted_sum(&series, FourierWeight::Log, &cutoffs)?;
    let s2 = weighted_sum(&series, FourierWeight::LogSquared, &cutoffs)?;
    for (i, &l) in levels.iter().enumerate() {
        rows.push(vec![
            text("fourier"),
            Value::from(l),
            num(s1[2 * i]),
            num(s2[2 * i]),
            num(s1[2 * i + 1] - s1[2 * i]),
        ]);
    }
    let inc = s1[3] - s1[2];
    checks.push(check("log_sum_cauchy", inc < 1e-6, format!("increment past L = {} is {inc:e}", levels[1])));
    let ln2 = std::f64::consts::LN_2;
    let need = 0.8 * (levels[1] as f64 / levels[0] as f64).ln() * ln2 * ln2;
    let gain = s2[2] - s2[0];
    checks.push(check(
        "log2_sum_diverges",
        gain >= need,
        format!("S({}) - S({}) = {gain:.6} vs {need:.6}", levels[1], levels[0]),
    ));

    // cosine integrals against ln m and ln² m
    let ints: Vec<(f64, f64)> = ms.par_iter().map(|&m| cosine_log_integrals(m as i64)).collect();
    let (mut q0, mut ql) = (Vec::new(), Vec::new());
    for (&m, &(i0, il)) in ms.iter().zip(&ints) {
        let lm = (m as f64).ln();
        q0.push(i0 / lm);
        ql.push(il / (lm * lm));
        rows.push(vec![text("cosine"), Value::from(m), num(i0 / lm), num(il / (lm * lm)), num(i0)]);
    }
    let (s0, sl) = (max_over_min(&q0), max_over_min(&ql));
    checks.push(advisory(
        "cosine_ratios_stable",
        s0 <= 1.1 && sl <= 1.1,
        format!("max/min of I0/ln m = {s0:.4}, of I_log/ln² m = {sl:.4}"),
    ));
    Ok(Table { rows, checks })
}

fn whitney_lemmas(p: &mut Params, seed: u64) -> Result<Table> {
    let depths = p.usize_list("depths")?;
    p.ensure(
        !depths.is_empty() && depths.windows(2).all(|w| w[0] < w[1]) && depths.iter().all(|d| (2..=10).contains(d)),
        "depths",
        "depths must increase within 2..=10",
    )?;
    let s = p.f64("s")?;
    p.ensure(s > 0.0 && s.is_finite(), "s", "the exponent must be positive")?;
    let pairs = p.usize("pairs")?;
    p.ensure(pairs >= 1, "pairs", "at least one pair")?;
    let phi = KernelProfile::power(s);
    let exps = ExponentPair::hilbert();
    let sampling = PairSampling { pairs, seed };
    let mut rows = Vec::new();
    let mut consts: Vec<[f64; 3]> = Vec::new();
    let mut violations = 0;
    for &depth in &depths {
        let w = whitney_decompose(&Domain::unit_square(), depth as i32, None)?;
        let v = verify_whitney(&w).total();
        violations += v;
        let rho = minimal_rho(&w, pairs, seed)?.rho;
        let w = w.with_rho(rho);
        let a = lemma_sum_all_over(&w, &phi, exps.t1(), &exps)?.constant;
        let b = lemma_shadow_sum(&w, &phi, exps.t1(), &exps)?.constant;
        let c = lemma_chain_sum(&w, &phi, exps.t2(), &exps, sampling)?.constant;
        rows.push(vec![Value::from(depth), Value::from(w.len()), num(rho), Value::from(v), num(a), num(b), num(c)]);
        consts.push([a, b, c]);
    }
    let mut checks = vec![check("axioms_hold", violations == 0, format!("{violations} violations"))];
    if consts.len() >= 2 {
        let (first, last) = (consts[0], consts[consts.len() - 1]);
        let dev: Vec<f64> = (0..3).map(|i| (last[i] / first[i] - 1.0).abs()).collect();
        checks.push(check(
            "constants_depth_stable",
            dev.iter().all(|&d| d <= 0.2),
            format!("relative changes {dev:?} between depths {} and {}", depths[0], depths[depths.len() - 1]),
        ));
    }
    Ok(Table { rows, checks })
}
