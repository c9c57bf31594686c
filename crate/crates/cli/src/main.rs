use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use seminorm_core::experiments::{describe, list_experiments, run_experiment, ExperimentSpec, OutputFormat};
use seminorm_core::geometry::{
    lemma_chain_sum, lemma_shadow_sum, lemma_sum_all_over, minimal_rho, verify_whitney, whitney_decompose, PairSampling,
};
use seminorm_core::kernels::{audit, AuditConfig};
use seminorm_core::seminorm::seminorm_ladder;
use seminorm_core::{Domain, ExponentPair, Kernel, KernelProfile, QuadratureConfig, TestFunction};

#[derive(Parser)]
#[command(name = "seminorm", version, about = "Full and truncated nonlocal seminorms, kernel audits and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the kernel assumptions A1-A3 for one profile.
    Audit(AuditArgs),
    /// Build a Whitney decomposition, verify it and optionally run a lemma.
    Whitney(WhitneyArgs),
    /// Evaluate a full or truncated seminorm.
    Seminorm(SeminormArgs),
    /// Run a registered experiment.
    Experiment(ExperimentArgs),
    /// List the registered experiments.
    List,
}

#[derive(Args)]
struct KernelArgs {
    /// Profile as JSON, e.g. '{"variant":"power","params":{"exponent":0.25,"scale":1}}'.
    #[arg(long, conflicts_with = "alpha")]
    profile: Option<String>,
    /// Stable profile r^{α/2}.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
}

impl KernelArgs {
    fn profile(&self) -> Result<KernelProfile> {
        match (&self.profile, self.alpha) {
            (Some(text), _) => serde_json::from_str(text).context("parsing --profile"),
            (None, Some(a)) => Ok(KernelProfile::stable(a)),
            (None, None) => bail!("give --profile or --alpha"),
        }
    }

    fn exps(&self) -> Result<ExponentPair> {
        Ok(ExponentPair::new(self.p, self.q)?)
    }
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Domain diameter; 0 for an unbounded domain.
    #[arg(long, default_value_t = 1.0)]
    diam: f64,
    #[arg(long, value_enum, default_value_t = AuditFormat::Json)]
    format: AuditFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    AllOver,
    Shadow,
    Chain,
}

#[derive(Args)]
struct WhitneyArgs {
    /// unit-interval, unit-square, l-shape, interval:A:B or box:LO1,LO2:HI1,HI2.
    #[arg(long, default_value = "unit-square")]
    domain: String,
    #[arg(long, default_value_t = 6)]
    depth: i32,
    /// Run one lemma and print its CSV instead of the decomposition.
    #[arg(long, value_enum)]
    lemma: Option<Lemma>,
    /// Exponent of the power profile used by the lemmas.
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    /// Sampled pairs for the shadow radius and chain lemma.
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Default,
    Planar,
    Strip,
}

#[derive(Args)]
struct SeminormArgs {
    /// Test function as JSON, e.g. '{"variant":"capped_reciprocal","params":{"n":16}}'.
    #[arg(long)]
    function: String,
    /// As for `whitney`, plus strip:K:L.
    #[arg(long, default_value = "unit-interval")]
    domain: String,
    #[command(flatten)]
    kernel: KernelArgs,
    /// Use the flat kernel K ≡ 1 instead of a profile kernel.
    #[arg(long, conflicts_with_all = ["profile", "alpha"])]
    flat: bool,
    /// Truncation parameter; the full seminorm when absent.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, value_enum, default_value_t = Preset::Default)]
    preset: Preset,
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Args)]
struct ExperimentArgs {
    name: String,
    /// Parameter override `key=value`, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Flat key=value config; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print parameters and CSV columns instead of running.
    #[arg(long)]
    describe: bool,
}

fn parse_domain(s: &str) -> Result<Domain> {
    let nums = |t: &str| -> Result<Vec<f64>> {
        t.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| anyhow!("`{v}` is not a number"))).collect()
    };
    let parts: Vec<&str> = s.split(':').collect();
    Ok(match parts.as_slice() {
        ["unit-interval"] => Domain::unit_interval(),
        ["unit-square"] => Domain::unit_square(),
        ["l-shape"] => Domain::l_shape(),
        ["interval", a, b] => Domain::interval(a.parse()?, b.parse()?)?,
        ["box", lo, hi] => Domain::boxed(nums(lo)?, nums(hi)?)?,
        ["strip", k, l] => Domain::strip(k.parse()?, l.parse()?)?,
        _ => bail!("unknown domain `{s}`"),
    })
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict_code(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_audit(a: &AuditArgs) -> Result<ExitCode> {
    let kernel = Kernel::new(a.d, a.kernel.q, a.kernel.profile()?)?;
    let diam = (a.diam > 0.0).then_some(a.diam);
    let report = audit(&kernel, &a.kernel.exps()?, diam, &AuditConfig::default())?;
    let text = match a.format {
        AuditFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
        AuditFormat::Csv => report.to_csv(),
    };
    emit(a.out.as_ref(), &text)?;
    Ok(verdict_code(report.pass.iter().all(|&p| p)))
}

fn cmd_whitney(a: &WhitneyArgs) -> Result<ExitCode> {
    let domain = parse_domain(&a.domain)?;
    let w = whitney_decompose(&domain, a.depth, None)?;
    let violations = verify_whitney(&w);
    let rho = minimal_rho(&w, a.pairs, a.seed)?;
    let w = w.with_rho(rho.rho);
    eprintln!("cubes={} violations={} rho={}", w.len(), violations.total(), rho.rho);
    let text = match a.lemma {
        None => w.to_json_lines(),
        Some(lemma) => {
            let phi = KernelProfile::power(a.s);
            let exps = ExponentPair::hilbert();
            let report = match lemma {
                Lemma::AllOver => lemma_sum_all_over(&w, &phi, exps.t1(), &exps)?,
                Lemma::Shadow => lemma_shadow_sum(&w, &phi, exps.t1(), &exps)?,
                Lemma::Chain => {
                    lemma_chain_sum(&w, &phi, exps.t2(), &exps, PairSampling { pairs: a.pairs, seed: a.seed })?
                }
            };
            eprintln!("constant={}", report.constant);
            report.to_csv()
        }
    };
    emit(a.out.as_ref(), &text)?;
    Ok(verdict_code(violations.total() == 0))
}

fn cmd_seminorm(a: &SeminormArgs) -> Result<ExitCode> {
    let f: TestFunction = serde_json::from_str(&a.function).context("parsing --function")?;
    let domain = parse_domain(&a.domain)?;
    let kernel = if a.flat {
        Kernel::flat(domain.dim(), a.kernel.q)
    } else {
        Kernel::new(domain.dim(), a.kernel.q, a.kernel.profile()?)?
    };
    let mut cfg = match a.preset {
        Preset::Default => QuadratureConfig::default(),
        Preset::Planar => QuadratureConfig::planar(),
        Preset::Strip => QuadratureConfig::strip(),
    };
    if let Some(t) = a.rel_tol {
        cfg.rel_tol = t;
    }
    let thetas: Vec<f64> = a.theta.into_iter().collect();
    let ladder = seminorm_ladder(&f, &domain, &kernel, &a.kernel.exps()?, &thetas, &cfg)?;
    let e = ladder.truncated.first().unwrap_or(&ladder.full);
    let mut flags = Vec::new();
    if e.truncated_domain {
        flags.push("truncated");
    }
    if e.diverging {
        flags.push("diverging");
    }
    if e.low_confidence {
        flags.push("low_confidence");
    }
    let out = json!({
        "value": e.value,
        "value_squared": e.value_squared(),
        "abs_error": e.abs_error,
        "evaluations": e.evaluations,
        "flags": flags,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(a: &ExperimentArgs) -> Result<ExitCode> {
    if a.describe {
        let info = describe(&a.name)?;
        println!("{}: {}", info.name, info.anchor);
        println!("parameters:");
        for p in &info.params {
            println!("  {} = {}  ({})", p.key, p.default, p.rule);
        }
        println!("columns:");
        for c in &info.columns {
            println!("  {}: {}", c.name, c.meaning);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let mut spec = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let spec = ExperimentSpec::from_config(&text)?;
            if spec.name != a.name {
                bail!("config names experiment `{}` but `{}` was requested", spec.name, a.name);
            }
            spec
        }
        None => ExperimentSpec::new(&a.name),
    };
    let mut given = BTreeMap::new();
    for kv in &a.params {
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("--param needs key=value, got `{kv}`"))?;
        given.insert(k.trim().to_string(), v.trim().to_string());
    }
    spec.params.extend(given);
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    if let Some(out) = &a.out {
        spec.out = Some(out.display().to_string());
    }
    if let Some(f) = &a.format {
        spec.format = f.parse::<OutputFormat>()?;
    }
    let report = run_experiment(&spec)?;
    emit(spec.out.as_ref().map(PathBuf::from).as_ref(), &report.render(spec.format))?;
    for c in &report.verdict.checks {
        let tag = match (c.pass, c.required) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "fail (informational)",
        };
        eprintln!("{tag}: {}: {}", c.name, c.detail);
    }
    eprintln!(
        "verdict: {} (config {})",
        if report.verdict.pass { "pass" } else { "fail" },
        report.provenance.config_hash
    );
    Ok(verdict_code(report.verdict.pass))
}

fn cmd_list() -> Result<ExitCode> {
    for e in list_experiments() {
        println!("{:<24}{}", e.name, e.anchor);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Audit(a) => cmd_audit(a),
        Command::Whitney(a) => cmd_whitney(a),
        Command::Seminorm(a) => cmd_seminorm(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::List => cmd_list(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
