use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings that influence numeric results, echoed with every record.
#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub precision_bits: u32,
    pub boundary: String,
    pub backend_threshold: u64,
}

/// One command's output: the parameters needed to re-run it, the settings
/// in force, and a flat table. `details` carries nested data that only the
/// JSON form can hold.
#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: String,
    pub params: Value,
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<BTreeMap<String, Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl OutputRecord {
    pub fn new(command: &str, params: impl Serialize, metadata: Metadata, columns: &[&str]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            params: serde_json::to_value(params).expect("flag structs serialize"),
            metadata,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            details: None,
        }
    }

    /// Appends a row given in column order.
    pub fn push(&mut self, values: Vec<Value>) {
        assert_eq!(values.len(), self.columns.len(), "row width matches the columns");
        self.rows.push(self.columns.iter().cloned().zip(values).collect());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => render_json(self),
            Format::Csv => render_csv(self),
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> std::io::Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

/// Pretty JSON with keys sorted at every level.
fn render_json(record: &OutputRecord) -> String {
    let value = sort_keys(serde_json::to_value(record).expect("records serialize"));
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// `# key=value` header lines for the echo, then an RFC 4180 table.
fn render_csv(record: &OutputRecord) -> String {
    let mut text = format!("# schema_version={}\n# command={}\n", record.schema_version, record.command);
    if let Value::Object(params) = sort_keys(record.params.clone()) {
        for (k, v) in params {
            if !v.is_null() {
                text.push_str(&format!("# param.{k}={}\n", cell(&v)));
            }
        }
    }
    let meta = &record.metadata;
    text.push_str(&format!(
        "# meta.backend_threshold={}\n# meta.boundary={}\n# meta.precision_bits={}\n",
        meta.backend_threshold, meta.boundary, meta.precision_bits
    ));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&record.columns).expect("in-memory write");
    for row in &record.rows {
        w.write_record(record.columns.iter().map(|c| row.get(c).map(cell).unwrap_or_default()))
            .expect("in-memory write");
    }
    text.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 cells"));
    text
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        nested => nested.to_string(),
    }
}

/// Fixed-point decimal, with non-finite values spelled out.
pub fn fixed(x: f64, digits: usize) -> Value {
    if x.is_finite() {
        Value::String(format!("{x:.digits$}"))
    } else {
        Value::String(x.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn record() -> OutputRecord {
        let meta = Metadata {
            precision_bits: 128,
            boundary: "strict".into(),
            backend_threshold: 500,
        };
        let mut r = OutputRecord::new("demo", json!({"z": 1, "a": "x,y"}), meta, &["b", "a"]);
        r.push(vec![json!("1/2"), json!("say \"hi\"")]);
        r
    }

    #[test]
    fn csv_quotes_and_echoes() {
        let text = record().render(Format::Csv);
        assert!(text.starts_with("# schema_version=1\n# command=demo\n# param.a=x,y\n# param.z=1\n"));
        assert!(text.ends_with("b,a\n1/2,\"say \"\"hi\"\"\"\n"));
    }

    #[test]
    fn json_keys_are_sorted() {
        let text = record().render(Format::Json);
        let columns = text.find("\"columns\"").unwrap();
        let command = text.find("\"command\"").unwrap();
        let schema = text.find("\"schema_version\"").unwrap();
        assert!(columns < command && command < schema);
    }
}
