//! Deterministic JSON schedule reports.
//!
//! Keys are emitted in sorted order (the default `serde_json` map is a
//! B-tree), `-inf` becomes `null`, and numbers are normalized to at most nine
//! significant digits with integral values printed as integers.

use serde_json::{Map, Value};

use tropsched_core::matrix::{TropicalMatrix, TropicalVector};
use tropsched_core::scheduling::{Schedule, ScheduleFamily};
use tropsched_core::semifield::TropicalScalar;

/// Rounds to nine significant digits and prefers integer representation.
pub fn canonical_number(v: f64) -> Value {
    assert!(v.is_finite(), "only finite values are serialized as numbers");
    let rounded = round_significant(v, 9);
    if rounded.fract() == 0.0 && rounded.abs() < 9.0e15 {
        Value::from(rounded as i64)
    } else {
        Value::from(rounded)
    }
}

fn round_significant(v: f64, digits: i32) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let magnitude = v.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - magnitude);
    (v * factor).round() / factor
}

pub fn scalar_json(s: TropicalScalar) -> Value {
    if s.is_zero() {
        Value::Null
    } else {
        canonical_number(s.value())
    }
}

pub fn vector_json(v: &TropicalVector) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn matrix_json(m: &TropicalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| scalar_json(m.get(i, j))).collect()))
            .collect(),
    )
}

/// Builds the schedule report document for a solved problem.
pub fn schedule_report(
    family: &ScheduleFamily,
    picked: &Schedule,
    diagnostics: &[String],
) -> Value {
    let mut fam = Map::new();
    fam.insert("generator".into(), matrix_json(family.family().generator()));
    fam.insert("kind".into(), Value::String(family.family().kind().as_str().into()));
    fam.insert(
        "lower".into(),
        family.family().lower().map_or(Value::Null, vector_json),
    );
    fam.insert(
        "upper".into(),
        family.family().upper().map_or(Value::Null, vector_json),
    );

    let mut map = Map::new();
    map.insert(
        "diagnostics".into(),
        Value::Array(diagnostics.iter().map(|d| Value::String(d.clone())).collect()),
    );
    map.insert("family".into(), Value::Object(fam));
    map.insert("finish".into(), vector_json(&picked.finish));
    map.insert("objective".into(), scalar_json(family.objective()));
    map.insert("problem".into(), Value::String(family.problem().as_str().into()));
    map.insert("start".into(), vector_json(&picked.start));
    Value::Object(map)
}

/// Serializes a report with a trailing newline; identical inputs produce
/// identical bytes.
pub fn to_pretty_bytes(value: &Value) -> Vec<u8> {
    let mut out = serde_json::to_string_pretty(value)
        .expect("report values are always serializable")
        .into_bytes();
    out.push(b'\n');
    out
}
