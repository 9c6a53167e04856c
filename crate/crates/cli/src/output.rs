use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};

use crate::error::CliError;

/// Twelve significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
            _ => s,
        }
    }
}

/// JSON number carrying the same text as the CSV files; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt_num(x).parse::<Number>().expect("formatted float is a JSON number"))
    } else {
        Value::Null
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Ordered `(key, value)` pairs echoed at the top of every file.
#[derive(Clone, Debug, Default)]
pub struct Echo {
    entries: Vec<(String, String)>,
}

impl Echo {
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn push_num(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, fmt_num(value));
    }

    pub fn extend(&mut self, prefix: &str, pairs: &[(String, f64)]) {
        for (k, v) in pairs {
            self.push_num(format!("{prefix}.{k}"), *v);
        }
    }

    fn header(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect()
    }
}

/// Builds a JSON object from numeric pairs.
pub fn num_object(pairs: &[(String, f64)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.clone(), num(*v))).collect())
}

pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root)
            .map_err(|e| CliError::Io(format!("cannot create output directory {}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write(&mut self, name: &str, text: String) -> Result<(), CliError> {
        let path = self.root.join(name);
        fs::write(&path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    /// CSV with echo comments, a header row and numeric rows.
    pub fn csv(&mut self, name: &str, echo: &Echo, columns: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
        let mut text = echo.header();
        text.push_str(&columns.join(","));
        text.push('\n');
        for row in rows {
            text.push_str(&row.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(","));
            text.push('\n');
        }
        self.write(name, text)
    }

    /// CSV whose first field of each row is a label.
    pub fn labelled_csv(
        &mut self,
        name: &str,
        echo: &Echo,
        columns: &[&str],
        rows: &[(String, Vec<f64>)],
    ) -> Result<(), CliError> {
        let mut text = echo.header();
        text.push_str(&columns.join(","));
        text.push('\n');
        for (label, row) in rows {
            text.push_str(label);
            for &x in row {
                text.push(',');
                text.push_str(&fmt_num(x));
            }
            text.push('\n');
        }
        self.write(name, text)
    }

    /// Matrix block preceded by `q_values` and `p_values` lines; row `i` holds `W(q_i, p_j)`.
    pub fn wigner_csv(
        &mut self,
        name: &str,
        echo: &Echo,
        q: &[f64],
        p: &[f64],
        rows: impl Iterator<Item = Vec<f64>>,
    ) -> Result<(), CliError> {
        let line = |label: &str, xs: &[f64]| {
            let mut s = label.to_string();
            for &x in xs {
                s.push(',');
                s.push_str(&fmt_num(x));
            }
            s.push('\n');
            s
        };
        let mut text = echo.header();
        text.push_str(&line("q_values", q));
        text.push_str(&line("p_values", p));
        for row in rows {
            text.push_str(&row.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(","));
            text.push('\n');
        }
        self.write(name, text)
    }

    pub fn json(&mut self, name: &str, body: Map<String, Value>) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&Value::Object(body))
            .map_err(|e| CliError::Io(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write(name, text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.04), "4.00000000000e-2");
        assert_eq!(fmt_num(-1234.5), "-1.23450000000e+3");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn json_numbers_keep_text() {
        assert_eq!(serde_json::to_string(&num(2.0)).unwrap(), "2.00000000000e+0");
        assert_eq!(num(f64::INFINITY), Value::Null);
    }
}
