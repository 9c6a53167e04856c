use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Resolved key/value settings of one run.
///
/// File entries are overridden by command-line entries. Every value read through the
/// typed getters, defaults included, is recorded for echoing into the outputs.
pub struct RunConfig {
    scenario: String,
    values: BTreeMap<String, String>,
    used: RefCell<BTreeMap<String, String>>,
}

/// Parses flat `key = value` text with `#` comments.
pub fn parse_text(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = parse_pair(line)
            .map_err(|e| CliError::Config(format!("{origin}:{}: {e}", lineno + 1)))?;
        if out.insert(key.clone(), value).is_some() {
            return Err(CliError::Config(format!("{origin}:{}: duplicate key '{key}'", lineno + 1)));
        }
    }
    Ok(out)
}

pub fn parse_pair(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() {
        return Err(format!("missing key in '{s}'"));
    }
    if v.is_empty() {
        return Err(format!("missing value for '{k}'"));
    }
    Ok((k.to_string(), v.to_string()))
}

impl RunConfig {
    pub fn load(scenario: &str, file: Option<&Path>, overrides: Vec<(String, String)>) -> Result<Self, CliError> {
        let mut values = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                parse_text(&text, &path.display().to_string())?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in overrides {
            values.insert(k, v);
        }
        if let Some(s) = values.remove("scenario") {
            if s != scenario {
                return Err(CliError::Config(format!(
                    "config declares scenario '{s}' but the '{scenario}' command was run"
                )));
            }
        }
        Ok(Self {
            scenario: scenario.to_string(),
            values,
            used: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn scenario(&self) -> &str {
        &self.scenario
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        let unknown: Vec<&str> = self
            .values
            .keys()
            .map(String::as_str)
            .filter(|k| !allowed.contains(k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "unknown key(s) for '{}': {}",
                self.scenario,
                unknown.join(", ")
            )))
        }
    }

    fn record(&self, key: &str, value: String) {
        self.used.borrow_mut().insert(key.to_string(), value);
    }

    pub fn parsed<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => {
                let v = raw
                    .parse::<T>()
                    .map_err(|e| CliError::Config(format!("invalid value '{raw}' for '{key}': {e}")))?;
                self.record(key, raw.clone());
                Ok(Some(v))
            }
        }
    }

    pub fn get<T>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + fmt::Display,
        T::Err: fmt::Display,
    {
        match self.parsed(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, default.to_string());
                Ok(default)
            }
        }
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let v = self.get(key, default)?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("'{key}' must be finite")));
        }
        Ok(v)
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        let v: Option<f64> = self.parsed(key)?;
        if v.is_some_and(|x| !x.is_finite()) {
            return Err(CliError::Config(format!("'{key}' must be finite")));
        }
        Ok(v)
    }

    pub fn usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>, CliError> {
        let text = match self.values.get(key) {
            Some(raw) => raw.clone(),
            None => default.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
        };
        let parsed = text
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Config(format!("invalid list '{text}' for '{key}': {e}")))?;
        self.record(key, text);
        Ok(parsed)
    }

    pub fn bool(&self, key: &str, default: bool) -> Result<bool, CliError> {
        self.get(key, default)
    }

    /// Every value consumed so far, defaults included.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        let mut all = self.used.borrow().clone();
        all.insert("scenario".into(), self.scenario.clone());
        all
    }
}
