//! Named, reproducible experiments. Each one produces a table and a verdict
//! made of individual checks; identical specs give identical tables.

mod params;
mod registry;
mod runs;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use params::{parse_config, Params};
pub use registry::{describe, list_experiments, ColumnInfo, ExperimentInfo, ParamInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidArgument(format!("unknown output format `{s}`"))),
        }
    }
}

/// What to run and where the table goes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    /// Output path; standard output when absent.
    pub out: Option<String>,
    pub format: OutputFormat,
}

impl ExperimentSpec {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), params: BTreeMap::new(), seed: 0, out: None, format: OutputFormat::Csv }
    }

    pub fn with(mut self, key: &str, value: &str) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Builds a spec from a flat `key = value` config. The keys
    /// `experiment`, `seed`, `out` and `format` are reserved; all others are
    /// experiment parameters.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut map = parse_config(text)?;
        let name = map.remove("experiment").ok_or_else(|| Error::BadParam {
            key: "experiment".into(),
            reason: "the config must name an experiment".into(),
        })?;
        let mut spec = Self::new(&name);
        if let Some(s) = map.remove("seed") {
            spec.seed = s
                .parse()
                .map_err(|_| Error::BadParam { key: "seed".into(), reason: format!("`{s}` is not an integer") })?;
        }
        spec.out = map.remove("out");
        if let Some(f) = map.remove("format") {
            spec.format = f.parse()?;
        }
        spec.params = map;
        Ok(spec)
    }

    /// SHA-256 over the name, the sorted parameters and the seed.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.name.as_bytes());
        for (k, v) in &self.params {
            h.update(format!("\n{k}={v}").as_bytes());
        }
        h.update(format!("\nseed={}", self.seed).as_bytes());
        hex::encode(h.finalize())
    }
}

/// One named predicate of a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Informational checks are reported but do not enter the verdict.
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Verdict {
    fn from_checks(checks: Vec<Check>) -> Self {
        Self { pass: checks.iter().filter(|c| c.required).all(|c| c.pass), checks }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub verdict: Verdict,
    pub provenance: Provenance,
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// Column values of `name` as numbers (non-numbers become NaN).
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.verdict.checks.iter().find(|c| c.name == name)
    }
}

/// Runs a registered experiment. Numerical trouble (divergence, low
/// confidence) is recorded in the table; only invalid specs are errors.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let info = describe(&spec.name)?;
    let mut params = Params::new(&info, &spec.params)?;
    let table = runs::run(&spec.name, &mut params, spec.seed)?;
    params.finish()?;
    Ok(ExperimentReport {
        name: spec.name.clone(),
        columns: info.columns.iter().map(|c| c.name.to_string()).collect(),
        rows: table.rows,
        verdict: Verdict::from_checks(table.checks),
        provenance: Provenance {
            config_hash: spec.config_hash(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: spec.seed,
            params: params.resolved(),
        },
    })
}

/// Direction of a ratio ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// `max/min ≤ 2`.
    Bounded,
    /// `last/first ≥ 1.5` and nondecreasing.
    Growing,
    Neither,
}

impl Trend {
    pub fn of(ladder: &[f64]) -> Self {
        let (lo, hi) = ladder.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        if ladder.is_empty() || ladder.iter().any(|v| !v.is_finite()) {
            return Trend::Neither;
        }
        if hi <= 2.0 * lo {
            return Trend::Bounded;
        }
        let rising = ladder.windows(2).all(|w| w[1] >= w[0]);
        if rising && ladder[ladder.len() - 1] >= 1.5 * ladder[0] {
            Trend::Growing
        } else {
            Trend::Neither
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Trend::Bounded => "bounded",
            Trend::Growing => "growing",
            Trend::Neither => "neither",
        }
    }
}
