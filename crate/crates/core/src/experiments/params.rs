use std::collections::{BTreeMap, BTreeSet};

use super::registry::ExperimentInfo;
use crate::error::{Error, Result};

/// Parses a flat `key = value` file. Blank lines and lines starting with
/// `#` are skipped; repeated keys are an error.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("config line {} has no `=`: {line}", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::InvalidArgument(format!("config line {} has an empty key", i + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::InvalidArgument(format!("config key `{k}` is repeated")));
        }
    }
    Ok(out)
}

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::BadParam { key: key.to_string(), reason: reason.into() }
}

/// Parameter values with registry defaults filled in.
#[derive(Debug, Clone)]
pub struct Params {
    values: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl Params {
    pub fn new(info: &ExperimentInfo, given: &BTreeMap<String, String>) -> Result<Self> {
        let mut values: BTreeMap<String, String> =
            info.params.iter().map(|p| (p.key.to_string(), p.default.to_string())).collect();
        for (k, v) in given {
            if !values.contains_key(k) {
                let known: Vec<&str> = info.params.iter().map(|p| p.key).collect();
                return Err(bad(k, format!("unknown parameter for {}; expected one of {known:?}", info.name)));
            }
            values.insert(k.clone(), v.clone());
        }
        Ok(Self { values, used: BTreeSet::new() })
    }

    fn raw(&mut self, key: &str) -> Result<&str> {
        self.used.insert(key.to_string());
        self.values.get(key).map(String::as_str).ok_or_else(|| bad(key, "missing"))
    }

    pub fn f64(&mut self, key: &str) -> Result<f64> {
        let s = self.raw(key)?.to_string();
        s.parse().map_err(|_| bad(key, format!("`{s}` is not a number")))
    }

    pub fn usize(&mut self, key: &str) -> Result<usize> {
        let s = self.raw(key)?.to_string();
        s.parse().map_err(|_| bad(key, format!("`{s}` is not a nonnegative integer")))
    }

    /// Comma-separated numbers.
    pub fn f64_list(&mut self, key: &str) -> Result<Vec<f64>> {
        let s = self.raw(key)?.to_string();
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad(key, format!("`{t}` is not a number"))))
            .collect::<Result<_>>()?;
        if v.is_empty() {
            return Err(bad(key, "empty list"));
        }
        Ok(v)
    }

    pub fn usize_list(&mut self, key: &str) -> Result<Vec<usize>> {
        let s = self.raw(key)?.to_string();
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad(key, format!("`{t}` is not a nonnegative integer"))))
            .collect()
    }

    /// Semicolon-separated groups of colon-separated numbers.
    pub fn tuples(&mut self, key: &str, width: usize) -> Result<Vec<Vec<f64>>> {
        let s = self.raw(key)?.to_string();
        s.split(';')
            .map(|g| {
                let v: Vec<f64> = g
                    .split(':')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| bad(key, format!("`{t}` is not a number"))))
                    .collect::<Result<_>>()?;
                if v.len() != width {
                    return Err(bad(key, format!("group `{g}` needs {width} entries")));
                }
                Ok(v)
            })
            .collect()
    }

    /// Fails with a parameter error unless `ok`.
    pub fn ensure(&self, ok: bool, key: &str, reason: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(bad(key, reason))
        }
    }

    pub(crate) fn finish(&self) -> Result<()> {
        match self.values.keys().find(|k| !self.used.contains(*k)) {
            Some(k) => Err(bad(k, "declared but never read")),
            None => Ok(()),
        }
    }

    pub fn resolved(&self) -> BTreeMap<String, String> {
        self.values.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let m = parse_config("# comment\nexperiment = strip-1d\n\nalpha=0.5\n").unwrap();
        assert_eq!(m["experiment"], "strip-1d");
        assert_eq!(m["alpha"], "0.5");
        assert!(parse_config("a=1\na=2").is_err());
        assert!(parse_config("novalue").is_err());
    }
}
