use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use crate::numeral::C64;

pub(super) fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub(super) fn complex_list(v: &[C64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

pub(super) fn matrix(m: &DMatrix<C64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

fn round_number(x: f64, residual: bool) -> Value {
    let r: f64 = if residual {
        format!("{x:.3e}").parse().unwrap_or(x)
    } else {
        (x * 1e10).round() / 1e10
    };
    if r == 0.0 {
        return Value::from(0);
    }
    if !residual && r.fract() == 0.0 && r.abs() < 1e15 {
        return Value::from(r as i64);
    }
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn tidy_in(v: &mut Value, residual: bool) {
    match v {
        Value::Number(n) if n.is_f64() => *v = round_number(n.as_f64().unwrap_or(f64::NAN), residual),
        Value::Array(a) => a.iter_mut().for_each(|x| tidy_in(x, residual)),
        Value::Object(o) => {
            for (k, x) in o.iter_mut() {
                tidy_in(x, residual || k.contains("residual") || k == "tolerance");
            }
        }
        _ => {}
    }
}

/// Rounds values to 10 decimals and residuals and tolerances to 4 significant digits, so that output
/// does not depend on floating-point noise.
pub(super) fn tidy(v: &mut Value) {
    tidy_in(v, false)
}

fn as_complex(o: &Map<String, Value>) -> Option<(f64, f64)> {
    if o.len() != 2 {
        return None;
    }
    Some((o.get("re")?.as_f64()?, o.get("im")?.as_f64()?))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(o) => as_complex(o).map(|(re, im)| {
            if im == 0.0 {
                format!("{re}")
            } else if re == 0.0 {
                format!("{im}i")
            } else {
                format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs())
            }
        }),
        Value::Array(_) => None,
    }
}

fn table(rows: &[Vec<String>]) -> Vec<String> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let width: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, s)| format!("{s:>w$}", w = width[j]))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        })
        .collect()
}

fn lines(key: &str, v: &Value, indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    if let Some(s) = scalar(v) {
        out.push(format!("{pad}{key}: {s}"));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push(format!("{pad}{key}: [{}]", parts.join(", ")));
        }
        Value::Array(items) if items.iter().all(|r| r.as_array().is_some_and(|r| r.iter().all(|x| scalar(x).is_some()))) => {
            out.push(format!("{pad}{key}:"));
            let rows: Vec<Vec<String>> = items
                .iter()
                .map(|r| r.as_array().into_iter().flatten().filter_map(scalar).collect())
                .collect();
            out.extend(table(&rows).into_iter().map(|l| format!("{pad}  {l}")));
        }
        Value::Array(items) => {
            out.push(format!("{pad}{key}:"));
            for (i, x) in items.iter().enumerate() {
                lines(&format!("[{i}]"), x, indent + 2, out);
            }
        }
        Value::Object(o) => {
            out.push(format!("{pad}{key}:"));
            for (k, x) in o {
                lines(k, x, indent + 2, out);
            }
        }
        _ => unreachable!(),
    }
}

/// Aligned plain-text rendering of a JSON report.
pub(super) fn text(v: &Value) -> String {
    let mut out = Vec::new();
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                lines(k, x, 0, &mut out);
            }
        }
        other => lines("result", other, 0, &mut out),
    }
    out.join("\n")
}
