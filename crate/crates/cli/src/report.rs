use std::str::FromStr;

use nalgebra::DMatrix;
use pwave_core::families::ManifoldSpec;
use serde_json::{json, Map, Number, Value};

/// A float with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format!("{x:.16e}")).map(Value::Number).unwrap_or(Value::Null)
}

pub fn vector(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn matrix(m: &DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| vector(&m.row(i).iter().copied().collect::<Vec<_>>())).collect())
}

pub fn entries<'a>(it: impl Iterator<Item = (Vec<usize>, f64)> + 'a) -> Value {
    Value::Array(it.map(|(ix, v)| json!({ "index": ix, "value": num(v) })).collect())
}

pub fn spec_summary(spec: &ManifoldSpec) -> Value {
    let (p, q) = spec.signature();
    json!({
        "family": spec.family().to_string(),
        "dim": spec.dim(),
        "signature": [p, q],
        "coordinates": spec.coord_names(),
        "params": serde_json::to_value(spec.params()).unwrap_or(Value::Null),
        "warnings": spec.warnings(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warn => "warn",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
}

impl Record {
    /// Passes when `residual < tolerance`; a NaN residual fails.
    pub fn check(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let status = if residual < tolerance { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            status,
            residual,
            tolerance,
        }
    }

    pub fn warn(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Warn,
            residual: 0.0,
            tolerance: 0.0,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "status": self.status.as_str(),
            "residual": num(self.residual),
            "tolerance": num(self.tolerance),
        })
    }
}

/// Command echo, manifold summary, per-check records and any extra payload.
pub struct Report {
    pub command: Vec<String>,
    pub manifold: Value,
    pub records: Vec<Record>,
    pub payload: Map<String, Value>,
}

impl Report {
    pub fn new(command: Vec<String>, spec: &ManifoldSpec) -> Self {
        Self {
            command,
            manifold: spec_summary(spec),
            records: Vec::new(),
            payload: Map::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), json!(self.command));
        out.insert("manifold".into(), self.manifold.clone());
        out.extend(self.payload.clone());
        out.insert("records".into(), Value::Array(self.records.iter().map(Record::to_json).collect()));
        out.insert("ok".into(), Value::Bool(!self.failed()));
        Value::Object(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let text = num(0.1).to_string();
        let mantissa = text.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        assert_eq!(text.parse::<f64>().unwrap(), 0.1);
        assert_eq!(num(f64::NAN), Value::Null);
        let x = 0.8944271909999159;
        assert_eq!(num(x).to_string().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn nan_residual_fails() {
        assert_eq!(Record::check("x", f64::NAN, 1.0).status, Status::Fail);
        assert_eq!(Record::check("x", 0.5, 1.0).status, Status::Pass);
    }
}
