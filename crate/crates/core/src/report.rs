//! Uniform JSON report `{op, params, values, pass, error_bound}`.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub op: String,
    pub params: Map<String, Value>,
    pub values: Value,
    pub pass: Option<bool>,
    pub error_bound: Option<f64>,
}

impl Report {
    pub fn new(op: impl Into<String>) -> Self {
        Report {
            op: op.into(),
            params: Map::new(),
            values: Value::Null,
            pass: None,
            error_bound: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), to_value(value));
        self
    }

    pub fn values(mut self, values: impl Serialize) -> Self {
        self.values = to_value(values);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn error_bound(mut self, bound: f64) -> Self {
        self.error_bound = Some(bound);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain data")
    }
}

/// Non-finite floats become `null` rather than failing.
fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}
