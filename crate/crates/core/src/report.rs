//! JSON report envelope shared by the CLI and examples.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub kind: String,
    pub field_delta: Option<i64>,
    pub params: Value,
    pub values: Value,
    pub tolerances: Value,
}

impl Report {
    pub fn new(
        kind: &str,
        field_delta: Option<i64>,
        params: Value,
        values: impl Serialize,
    ) -> Self {
        Self {
            kind: kind.to_string(),
            field_delta,
            params,
            values: serde_json::to_value(values).unwrap_or(Value::Null),
            tolerances: json!({}),
        }
    }

    pub fn with_tolerances(mut self, tolerances: Value) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
