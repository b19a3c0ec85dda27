//! Deterministic number formatting and output sinks.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Environment variable overriding the number of significant digits.
pub const PRECISION_ENV: &str = "NANOTUBE_PRECISION";
pub const DEFAULT_PRECISION: usize = 12;

/// Significant digits from [`PRECISION_ENV`], default [`DEFAULT_PRECISION`].
pub fn precision() -> CliResult<usize> {
    match std::env::var(PRECISION_ENV) {
        Err(_) => Ok(DEFAULT_PRECISION),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(d) if (1..=17).contains(&d) => Ok(d),
            _ => Err(CliError::Input(format!("{PRECISION_ENV} must be an integer in 1..=17, got {s:?}"))),
        },
    }
}

/// `x` rounded to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Shortest text that reads back as `round_sig(x, digits)`.
pub fn fmt_num(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    let a = r.abs();
    if r == 0.0 {
        "0".to_string()
    } else if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_value(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x, digits))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_value(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_value(x, digits)),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to `digits` significant digits.
pub fn to_json<T: Serialize>(value: &T, digits: usize) -> CliResult<String> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    round_value(&mut v, digits);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}
