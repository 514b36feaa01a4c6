use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use thinfd::domains::BoundaryRow;
use thinfd::Error;

use crate::GlobalOpts;

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_REDUCTION: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_VERIFY: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, message)
    }

    /// Library errors on user input map to exit 2, everything else to
    /// `otherwise`.
    pub fn from_lib(e: Error, otherwise: u8) -> Self {
        let code = match e {
            Error::NotUnimodular { .. }
            | Error::NonFinite
            | Error::ZeroVector
            | Error::NonPositiveScale(_)
            | Error::EpsilonOutOfRange(_)
            | Error::ThetaOutsideCone { .. }
            | Error::InvalidArgument(_) => EXIT_INVALID,
            _ => otherwise,
        };
        Self::new(code, e.to_string())
    }
}

/// Writes `bytes` to `--out` or stdout.
pub fn write_out(opts: &GlobalOpts, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error, what: &str| CliError::new(EXIT_IO, format!("{what}: {e}"));
    match &opts.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| io(e, &path.display().to_string())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|()| out.flush()).map_err(|e| io(e, "stdout"))
        }
    }
}

/// JSON (or the `--pretty` listing) of a serializable report.
pub fn emit<T: Serialize>(opts: &GlobalOpts, report: &T) -> Result<(), CliError> {
    let value = serde_json::to_value(report).map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
    let mut text = if opts.pretty {
        let mut s = String::new();
        pretty(&value, "", &mut s);
        s
    } else {
        value.to_string()
    };
    text.push('\n');
    write_out(opts, text.as_bytes())
}

fn pretty(v: &Value, path: &str, out: &mut String) {
    let child = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => m.iter().for_each(|(k, x)| pretty(x, &child(k), out)),
        Value::Array(a) if !a.is_empty() && a.iter().all(|x| x.is_number()) => {
            let items: Vec<String> = a.iter().map(Value::to_string).collect();
            let _ = writeln!(out, "{path:<32} [{}]", items.join(", "));
        }
        Value::Array(a) if !a.is_empty() => {
            a.iter().enumerate().for_each(|(i, x)| pretty(x, &child(&i.to_string()), out))
        }
        Value::String(s) => {
            let _ = writeln!(out, "{path:<32} {s}");
        }
        other => {
            let _ = writeln!(out, "{path:<32} {other}");
        }
    }
}

/// Shortest decimal with 17 significant digits, in scientific notation.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn boundary_csv(rows: &[BoundaryRow<f64>]) -> String {
    let mut s = String::from("region,a,t_lo,t_hi\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.region, float17(r.a), float17(r.t_lo), float17(r.t_hi));
    }
    s
}
