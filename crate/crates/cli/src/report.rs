//! Run reports: per-case records plus one summary object.
//!
//! JSON output is one record per line followed by `{"summary": {...}}`.
//! CSV output is a single table with a leading `record` column that is
//! `case` for records and `summary` for the last row; nested values are
//! written as compact JSON.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::{CliError, Command, Format, Settings};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    PropertyFailure,
    InvalidInput,
    InternalError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::PropertyFailure => 1,
            Status::InvalidInput => 2,
            Status::InternalError => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::PropertyFailure => "property-failure",
            Status::InvalidInput => "invalid-input",
            Status::InternalError => "internal-error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: Option<Command>,
    pub records: Vec<Value>,
    pub summary: Map<String, Value>,
    pub status: Status,
    pub error: Option<String>,
}

impl RunReport {
    pub fn new(command: Command, settings: &Settings) -> Self {
        Self {
            command: Some(command),
            records: Vec::new(),
            summary: settings_summary(Some(command), Some(settings)),
            status: Status::Ok,
            error: None,
        }
    }

    pub fn failed(command: Option<Command>, settings: Option<&Settings>, err: &CliError) -> Self {
        let mut summary = settings_summary(command, settings);
        summary.insert("error".into(), json!(err.code()));
        Self {
            command,
            records: vec![json!({ "error": err.code(), "message": err.to_string() })],
            summary,
            status: err.status(),
            error: Some(err.to_string()),
        }
    }

    pub fn push(&mut self, record: Value) {
        self.records.push(record);
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.summary.insert(key.into(), value);
    }

    /// Marks a property failure unless a worse status is already set.
    pub fn fail_property(&mut self) {
        if self.status == Status::Ok {
            self.status = Status::PropertyFailure;
        }
    }

    pub(crate) fn finish(&mut self, wall_time_seconds: f64) {
        self.summary.insert("records".into(), json!(self.records.len()));
        self.summary.insert("status".into(), json!(self.status.name()));
        self.summary.insert("exit_code".into(), json!(self.status.exit_code()));
        self.summary.insert("wall_time_seconds".into(), json!(wall_time_seconds));
    }

    /// The report without the wall-time field, which is the only
    /// nondeterministic part.
    pub fn body(&self) -> (Vec<Value>, Map<String, Value>) {
        let mut summary = self.summary.clone();
        summary.remove("wall_time_seconds");
        (self.records.clone(), summary)
    }

    pub fn write(&self, w: &mut impl Write, format: Format) -> std::io::Result<()> {
        match format {
            Format::Json => {
                for r in &self.records {
                    serde_json::to_writer(&mut *w, r)?;
                    writeln!(w)?;
                }
                serde_json::to_writer(&mut *w, &json!({ "summary": self.summary }))?;
                writeln!(w)
            }
            Format::Csv => self.write_csv(w),
        }
    }

    pub fn write_to_path(&self, path: &Path, format: Format) -> std::io::Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut file, format)?;
        file.flush()
    }

    fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        let mut columns: Vec<String> = vec!["record".into()];
        let rows: Vec<(&str, &Map<String, Value>)> = self
            .records
            .iter()
            .filter_map(|r| r.as_object().map(|o| ("case", o)))
            .chain(std::iter::once(("summary", &self.summary)))
            .collect();
        for (_, row) in &rows {
            for key in row.keys() {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&columns)?;
        for (kind, row) in rows {
            let cells = columns.iter().map(|col| match col.as_str() {
                "record" => kind.to_string(),
                key => row.get(key).map(cell).unwrap_or_default(),
            });
            out.write_record(cells)?;
        }
        out.flush()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn settings_summary(command: Option<Command>, settings: Option<&Settings>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command.map(Command::name)));
    if let Some(s) = settings {
        m.insert("seed".into(), json!(s.seed));
        m.insert("samples".into(), json!(s.samples));
        m.insert("c".into(), json!(s.c));
        m.insert("tol_rel".into(), json!(s.tol.rel));
        m.insert("tol_abs".into(), json!(s.tol.abs));
    }
    m
}
