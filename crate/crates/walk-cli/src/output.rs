//! Deterministic CSV and JSON rendering.
//!
//! Numbers are written with 17 significant digits in scientific notation,
//! which round-trips f64 exactly and is locale independent. Rows are sorted
//! by position (joint rows lexicographically), so two runs with the same
//! flags produce byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use walk_core::{Distribution, JointDistribution};

use crate::CliError;

/// 17 significant digits, scientific notation.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_distribution(dist: &Distribution) -> String {
    let mut out = String::from("position,probability\n");
    for (i, p) in dist.iter() {
        out.push_str(&format!("{i},{}\n", sig17(p)));
    }
    out
}

pub fn csv_distribution_trace<'a, I>(steps: I) -> String
where
    I: IntoIterator<Item = (usize, &'a Distribution)>,
{
    let mut out = String::from("step,position,probability\n");
    for (step, dist) in steps {
        for (i, p) in dist.iter() {
            out.push_str(&format!("{step},{i},{}\n", sig17(p)));
        }
    }
    out
}

pub fn csv_joint(dist: &JointDistribution) -> String {
    let mut out = String::from("i,j,probability\n");
    for ((i, j), p) in dist.iter() {
        out.push_str(&format!("{i},{j},{}\n", sig17(p)));
    }
    out
}

pub fn csv_joint_trace<'a, I>(steps: I) -> String
where
    I: IntoIterator<Item = (usize, &'a JointDistribution)>,
{
    let mut out = String::from("step,i,j,probability\n");
    for (step, dist) in steps {
        for ((i, j), p) in dist.iter() {
            out.push_str(&format!("{step},{i},{j},{}\n", sig17(p)));
        }
    }
    out
}

pub fn json_distribution_value(dist: &Distribution) -> Value {
    Value::Array(dist.iter().map(|(i, p)| json!([i, p])).collect())
}

pub fn json_joint_value(dist: &JointDistribution) -> Value {
    Value::Array(dist.iter().map(|((i, j), p)| json!([i, j, p])).collect())
}

/// Assembles the top-level JSON document: the config object plus the payload
/// fields, rendered compactly with a trailing newline.
pub fn json_document(config: Value, fields: Vec<(&str, Value)>) -> String {
    let mut map = serde_json::Map::new();
    map.insert("config".to_string(), config);
    for (key, value) in fields {
        map.insert(key.to_string(), value);
    }
    let mut text = serde_json::to_string(&Value::Object(map))
        .expect("in-memory JSON serialization cannot fail");
    text.push('\n');
    text
}

/// Writes `contents` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, contents).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Derives a per-period path by injecting `_T<n>` before the extension:
/// `plots/sweep.csv` becomes `plots/sweep_T8.csv`.
pub fn with_period_suffix(path: &Path, period: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_T{period}.{}", ext.to_string_lossy()),
        None => format!("{stem}_T{period}"),
    };
    path.with_file_name(name)
}
