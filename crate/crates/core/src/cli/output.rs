//! Report rendering: a JSON object or a TSV table.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Tsv,
}

/// Everything a subcommand reports.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub method: Option<String>,
    pub tolerances: Map<String, Value>,
    pub seed: Option<u64>,
    pub summary: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Report::default() }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn tolerance(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.tolerances.insert(key.to_string(), value.into());
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    pub fn columns(&mut self, names: &[&str]) -> &mut Self {
        self.columns = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn row(&mut self, values: Vec<Value>) -> &mut Self {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
        self
    }
}

/// Writes floats with 17 significant digits.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }
}

pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).expect("serializing an in-memory value");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn render(report: &Report, format: OutputFormat, timestamp: Option<u64>) -> String {
    match format {
        OutputFormat::Json => render_json(report, timestamp),
        OutputFormat::Tsv => render_tsv(report, timestamp),
    }
}

fn render_json(report: &Report, timestamp: Option<u64>) -> String {
    let mut top = Map::new();
    top.insert("tool".into(), env!("CARGO_PKG_NAME").into());
    top.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    top.insert("command".into(), report.command.clone().into());
    top.insert("inputs".into(), Value::Object(report.inputs.clone()));
    top.insert("method".into(), report.method.clone().map_or(Value::Null, Value::from));
    top.insert("tolerances".into(), Value::Object(report.tolerances.clone()));
    top.insert("seed".into(), report.seed.map_or(Value::Null, Value::from));
    top.insert("summary".into(), Value::Object(report.summary.clone()));
    let mut results = Map::new();
    results.insert("columns".into(), report.columns.iter().map(|c| Value::from(c.as_str())).collect());
    results.insert("rows".into(), report.rows.iter().map(|r| Value::Array(r.clone())).collect());
    top.insert("results".into(), Value::Object(results));
    if let Some(ts) = timestamp {
        top.insert("timestamp".into(), ts.into());
    }
    let mut s = to_json_string(&Value::Object(top));
    s.push('\n');
    s
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => format_f64(f),
            _ => n.to_string(),
        },
        other => to_json_string(other),
    }
}

fn render_tsv(report: &Report, timestamp: Option<u64>) -> String {
    let mut out = String::new();
    let mut meta = |k: &str, v: String| out.push_str(&format!("# {k}\t{v}\n"));
    meta("tool", format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")));
    meta("command", report.command.clone());
    if let Some(m) = &report.method {
        meta("method", m.clone());
    }
    if let Some(s) = report.seed {
        meta("seed", s.to_string());
    }
    for (k, v) in report.summary.iter() {
        meta(k, tsv_cell(v));
    }
    if let Some(ts) = timestamp {
        meta("timestamp", ts.to_string());
    }
    out.push_str(&report.columns.join("\t"));
    out.push('\n');
    for row in &report.rows {
        out.push_str(&row.iter().map(tsv_cell).collect::<Vec<_>>().join("\t"));
        out.push('\n');
    }
    out
}
