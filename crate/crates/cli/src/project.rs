//! Project files: a JSON document with an `activities` list, lag matrices and
//! optional time vectors.
//!
//! Matrices are arrays of row arrays; `null` stands for an absent lag
//! (`-inf`). The `start_finish` matrix is mandatory and its diagonal (the
//! minimum durations) must be non-null. `start_start` and `finish_start`
//! default to "no constraints" when omitted.

use serde::Deserialize;
use thiserror::Error;

use tropsched_core::matrix::{TropicalMatrix, TropicalVector};
use tropsched_core::scheduling::{ModelError, ProjectModel};
use tropsched_core::semifield::TropicalScalar;

use crate::report::canonical_number;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl From<ModelError> for ParseError {
    fn from(e: ModelError) -> Self {
        ParseError::Invalid { path: "$".into(), message: e.to_string() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectFile {
    activities: Vec<String>,
    start_finish: Vec<Vec<Option<f64>>>,
    #[serde(default)]
    start_start: Option<Vec<Vec<Option<f64>>>>,
    #[serde(default)]
    finish_start: Option<Vec<Vec<Option<f64>>>>,
    #[serde(default)]
    due_dates: Option<Vec<Option<f64>>>,
    #[serde(default)]
    deadlines: Option<Vec<Option<f64>>>,
    #[serde(default)]
    release_times: Option<Vec<Option<f64>>>,
    #[serde(default)]
    release_deadlines: Option<Vec<Option<f64>>>,
}

fn scalar_at(path: &str, value: Option<f64>) -> Result<TropicalScalar, ParseError> {
    match value {
        None => Ok(TropicalScalar::zero()),
        Some(v) => TropicalScalar::try_new(v)
            .map_err(|e| ParseError::Invalid { path: path.into(), message: e.to_string() }),
    }
}

fn matrix_at(name: &str, n: usize, rows: &[Vec<Option<f64>>]) -> Result<TropicalMatrix, ParseError> {
    if rows.len() != n {
        return Err(ParseError::Invalid {
            path: name.into(),
            message: format!("expected {n} rows to match the activity count, got {}", rows.len()),
        });
    }
    let mut out = TropicalMatrix::zero(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(ParseError::Invalid {
                path: format!("{name}[{i}]"),
                message: format!("expected {n} columns to match the activity count, got {}", row.len()),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            out.set(i, j, scalar_at(&format!("{name}[{i}][{j}]"), v)?);
        }
    }
    Ok(out)
}

fn vector_at(name: &str, n: usize, values: &[Option<f64>]) -> Result<TropicalVector, ParseError> {
    if values.len() != n {
        return Err(ParseError::Invalid {
            path: name.into(),
            message: format!("expected {n} entries to match the activity count, got {}", values.len()),
        });
    }
    let mut out = TropicalVector::zero(n);
    for (i, &v) in values.iter().enumerate() {
        out.set(i, scalar_at(&format!("{name}[{i}]"), v)?);
    }
    Ok(out)
}

/// Parses and validates a project file.
pub fn parse_project(bytes: &[u8]) -> Result<ProjectModel, ParseError> {
    let file: ProjectFile =
        serde_json::from_slice(bytes).map_err(|e| ParseError::Malformed(e.to_string()))?;
    let n = file.activities.len();
    if n == 0 {
        return Err(ParseError::Invalid {
            path: "activities".into(),
            message: "at least one activity is required".into(),
        });
    }

    let start_finish = matrix_at("start_finish", n, &file.start_finish)?;
    for i in 0..n {
        if start_finish.get(i, i).is_zero() {
            return Err(ParseError::Invalid {
                path: format!("start_finish[{i}][{i}]"),
                message: format!(
                    "minimum duration of activity `{}` must not be null",
                    file.activities[i]
                ),
            });
        }
    }

    let mut model = ProjectModel::new(start_finish)?.with_names(file.activities.clone())?;
    if let Some(rows) = &file.start_start {
        model = model.with_start_start(matrix_at("start_start", n, rows)?)?;
    }
    if let Some(rows) = &file.finish_start {
        model = model.with_finish_start(matrix_at("finish_start", n, rows)?)?;
    }
    if let Some(values) = &file.due_dates {
        model = model.with_due_dates(vector_at("due_dates", n, values)?)?;
    }
    if let Some(values) = &file.deadlines {
        model = model.with_deadlines(vector_at("deadlines", n, values)?)?;
    }
    if let Some(values) = &file.release_times {
        model = model.with_release_times(vector_at("release_times", n, values)?)?;
    }
    if let Some(values) = &file.release_deadlines {
        model = model.with_release_deadlines(vector_at("release_deadlines", n, values)?)?;
    }
    Ok(model)
}

fn matrix_json(m: &TropicalMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows())
            .map(|i| {
                serde_json::Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            let s = m.get(i, j);
                            if s.is_zero() {
                                serde_json::Value::Null
                            } else {
                                canonical_number(s.value())
                            }
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn vector_json(v: &TropicalVector) -> serde_json::Value {
    serde_json::Value::Array(
        v.iter()
            .map(|s| {
                if s.is_zero() {
                    serde_json::Value::Null
                } else {
                    canonical_number(s.value())
                }
            })
            .collect(),
    )
}

/// Canonical re-serialization of a model: sorted keys, `null` for `-inf`,
/// numbers normalized. Parsing the output reproduces the model exactly.
pub fn emit_project(model: &ProjectModel) -> String {
    let mut map = serde_json::Map::new();
    let names: Vec<serde_json::Value> = match model.names() {
        Some(names) => names.iter().map(|n| serde_json::Value::String(n.clone())).collect(),
        None => (0..model.len())
            .map(|i| serde_json::Value::String(format!("activity-{i}")))
            .collect(),
    };
    map.insert("activities".into(), serde_json::Value::Array(names));
    map.insert("start_finish".into(), matrix_json(model.start_finish()));
    if model.start_start().is_nonzero() {
        map.insert("start_start".into(), matrix_json(model.start_start()));
    }
    if model.finish_start().is_nonzero() {
        map.insert("finish_start".into(), matrix_json(model.finish_start()));
    }
    if let Some(v) = model.due_dates() {
        map.insert("due_dates".into(), vector_json(v));
    }
    if let Some(v) = model.deadlines() {
        map.insert("deadlines".into(), vector_json(v));
    }
    if let Some(v) = model.release_times() {
        map.insert("release_times".into(), vector_json(v));
    }
    if let Some(v) = model.release_deadlines() {
        map.insert("release_deadlines".into(), vector_json(v));
    }
    let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(map))
        .expect("report values are always serializable");
    out.push('\n');
    out
}
