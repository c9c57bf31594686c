use seminorm_core::experiments::{describe, list_experiments, parse_config, OutputFormat, Trend};
use seminorm_core::{run_experiment, Error, ExperimentSpec};

fn required_pass(name: &str, spec: ExperimentSpec) {
    let r = run_experiment(&spec).unwrap();
    for c in r.verdict.checks.iter().filter(|c| c.required) {
        assert!(c.pass, "{name}: {} failed: {}", c.name, c.detail);
    }
    assert!(r.verdict.pass);
}

#[test]
fn registry_lists_every_experiment() {
    let names: Vec<&str> = list_experiments().iter().map(|e| e.name).collect();
    for n in [
        "kernel-audit",
        "uniform-square-ratio",
        "const-kernel-blowup",
        "hilbert-kernel-blowup",
        "strip-1d",
        "strip-kl",
        "zero-order-log",
        "whitney-lemmas",
    ] {
        assert!(names.contains(&n), "{n}");
    }
    for e in list_experiments() {
        assert!(!e.anchor.is_empty() && !e.columns.is_empty() && !e.params.is_empty(), "{}", e.name);
    }
    let info = describe("const-kernel-blowup").unwrap();
    assert!(info.params.iter().any(|p| p.key == "gammas" && p.rule.contains("1/2")));
    assert!(matches!(describe("nope"), Err(Error::UnknownExperiment(_))));
}

#[test]
fn parameter_errors() {
    let bad = |spec: ExperimentSpec| matches!(run_experiment(&spec), Err(Error::BadParam { .. }));
    assert!(bad(ExperimentSpec::new("strip-1d").with("beta", "1")));
    assert!(bad(ExperimentSpec::new("strip-1d").with("alpha", "two")));
    assert!(bad(ExperimentSpec::new("strip-1d").with("alpha", "2.5")));
    assert!(bad(ExperimentSpec::new("const-kernel-blowup").with("gammas", "0.25,0.5")));
    assert!(bad(ExperimentSpec::new("const-kernel-blowup").with("gammas", "0.4,0.25")));
    assert!(bad(ExperimentSpec::new("hilbert-kernel-blowup").with("ns", "16,16")));
    assert!(bad(ExperimentSpec::new("strip-kl").with("cases", "1:1")));
    assert!(bad(ExperimentSpec::new("whitney-lemmas").with("depths", "6,12")));
    assert!(bad(ExperimentSpec::new("zero-order-log").with("fourier_n", "1")));
}

#[test]
fn config_files_and_hashes() {
    let text = "# run\nexperiment = hilbert-kernel-blowup\nseed = 7\nformat = json\nns = 16,64\n";
    let spec = ExperimentSpec::from_config(text).unwrap();
    assert_eq!(spec.name, "hilbert-kernel-blowup");
    assert_eq!((spec.seed, spec.format), (7, OutputFormat::Json));
    assert_eq!(spec.params["ns"], "16,64");
    let same = ExperimentSpec::new("hilbert-kernel-blowup").with("ns", "16,64").seeded(7);
    assert_eq!(spec.config_hash(), same.config_hash());
    assert_ne!(spec.config_hash(), same.clone().seeded(8).config_hash());
    assert_ne!(spec.config_hash(), same.with("ns", "16,65").config_hash());
    assert_eq!(spec.config_hash().len(), 64);

    assert!(ExperimentSpec::from_config("ns = 1").is_err());
    assert!(ExperimentSpec::from_config("experiment = strip-1d\nseed = x").is_err());
    assert!(parse_config("a = 1\na = 2").is_err());
}

#[test]
fn reports_are_deterministic() {
    let spec = ExperimentSpec::new("hilbert-kernel-blowup").with("ns", "16,64").seeded(3);
    let a = run_experiment(&spec).unwrap();
    let b = run_experiment(&spec).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.provenance.config_hash, spec.config_hash());
    assert_eq!(a.provenance.params["theta"], "0.5");

    let spec = ExperimentSpec::new("whitney-lemmas").with("depths", "4,5").with("pairs", "50").seeded(11);
    assert_eq!(run_experiment(&spec).unwrap().to_csv(), run_experiment(&spec).unwrap().to_csv());
}

#[test]
fn report_shape_follows_the_registry() {
    let r = run_experiment(&ExperimentSpec::new("hilbert-kernel-blowup")).unwrap();
    let info = describe("hilbert-kernel-blowup").unwrap();
    let cols: Vec<&str> = info.columns.iter().map(|c| c.name).collect();
    assert_eq!(r.columns, cols);
    assert_eq!(r.rows.len(), 3);
    assert!(r.rows.iter().all(|row| row.len() == cols.len()));
    let csv = r.to_csv();
    assert_eq!(csv.lines().next().unwrap(), cols.join(","));
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["name"], "hilbert-kernel-blowup");
    assert!(r.check("region_monotone").is_some());
}

#[test]
fn trend_classification() {
    assert_eq!(Trend::of(&[1.0, 1.5, 1.9]), Trend::Bounded);
    assert_eq!(Trend::of(&[1.0, 2.0, 4.0]), Trend::Growing);
    assert_eq!(Trend::of(&[1.0, 4.0, 3.0]), Trend::Neither);
    assert_eq!(Trend::of(&[1.0, f64::INFINITY]), Trend::Neither);
    assert_eq!(Trend::of(&[]), Trend::Neither);
}

#[test]
fn kernel_audit_passes() {
    required_pass("kernel-audit", ExperimentSpec::new("kernel-audit"));
}

#[test]
fn const_kernel_blowup_passes() {
    let r = run_experiment(&ExperimentSpec::new("const-kernel-blowup")).unwrap();
    assert!(r.verdict.pass, "{:?}", r.verdict);
    let ratio = r.column("ratio_closed").unwrap();
    assert!(ratio.windows(2).all(|w| w[0] < w[1]));
    let exact = r.column("full2_exact").unwrap();
    let quad = r.column("full2_quad").unwrap();
    for (e, q) in exact.iter().zip(&quad) {
        assert!(((e - q) / e).abs() < 1e-4);
    }
}

#[test]
fn hilbert_blowup_passes_and_rejects_flat_ladders() {
    required_pass("hilbert-kernel-blowup", ExperimentSpec::new("hilbert-kernel-blowup"));
    // a ladder too short to show the logarithmic growth
    let r = run_experiment(&ExperimentSpec::new("hilbert-kernel-blowup").with("ns", "16,17")).unwrap();
    assert!(!r.verdict.pass);
    assert!(!r.check("ratio2_growth").unwrap().pass);
}

#[test]
fn strip_1d_passes_for_both_regimes() {
    required_pass("strip-1d", ExperimentSpec::new("strip-1d"));
    let r = run_experiment(&ExperimentSpec::new("strip-1d").with("alpha", "0.5")).unwrap();
    assert!(r.verdict.pass, "{:?}", r.verdict);
    assert!(r.check("growth_8_to_32").unwrap().pass);
}

#[test]
fn zero_order_log_required_checks_pass() {
    let r = run_experiment(&ExperimentSpec::new("zero-order-log")).unwrap();
    assert!(r.verdict.pass, "{:?}", r.verdict);
    let cosine = r.check("cosine_ratios_stable").unwrap();
    assert!(!cosine.required);
}

#[test]
fn whitney_lemmas_pass() {
    required_pass("whitney-lemmas", ExperimentSpec::new("whitney-lemmas"));
}
