use std::env;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "hecke-report";
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of the assertions made during one run.
#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Summary {
    pub fn new() -> Self {
        Summary { passed: true, checks: 0, failures: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failures.push(what.into());
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub config: Value,
    /// Seconds since the epoch from `SOURCE_DATE_EPOCH`, when set.
    pub timestamp: Option<String>,
    pub payload: Value,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(command: &'static str, config: Value, payload: Value, summary: Summary) -> Self {
        ReportDocument {
            schema: SCHEMA,
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            timestamp: env::var("SOURCE_DATE_EPOCH").ok(),
            payload: stringify_numbers(payload),
            summary,
        }
    }
}

/// Replaces every JSON number by its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(items) => Value::Array(items.into_iter().map(stringify_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

/// Rows to CSV text with a header taken from the first row's fields.
pub fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Prefixes every line of a CSV table with a constant column.
pub fn tag_csv(table: &str, column: &str, value: &str) -> String {
    let mut out = String::new();
    for (i, line) in table.lines().enumerate() {
        let head = if i == 0 { column } else { value };
        out.push_str(head);
        out.push(',');
        out.push_str(line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_become_strings() {
        let v = stringify_numbers(json!({"a": 1, "b": [2.5, true, "x"], "c": {"d": -3}}));
        assert_eq!(v, json!({"a": "1", "b": ["2.5", true, "x"], "c": {"d": "-3"}}));
    }

    #[test]
    fn summary_tracks_failures() {
        let mut s = Summary::new();
        s.check(true, "fine");
        s.check(false, "broken");
        assert!(!s.passed);
        assert_eq!((s.checks, s.failures.clone()), (2, vec!["broken".to_string()]));
    }

    #[test]
    fn csv_tagging() {
        assert_eq!(tag_csv("a,b\n1,2\n", "init", "rand"), "init,a,b\nrand,1,2\n");
    }
}
