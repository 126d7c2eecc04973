use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::CliResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Complete,
    /// Budget ran out; the rows are a prefix of the full answer.
    Truncated(String),
    NotConverged(String),
}

impl Status {
    fn label(&self) -> String {
        match self {
            Status::Complete => "complete".into(),
            Status::Truncated(why) => format!("truncated ({why})"),
            Status::NotConverged(why) => format!("not-converged ({why})"),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Complete => 0,
            Status::Truncated(_) | Status::NotConverged(_) => 3,
        }
    }
}

/// What a command produced: a CSV table, or a JSON document for commands
/// whose output is itself an input (eigen build).
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub document: Option<Value>,
    pub line: String,
    /// Extra fields for the JSON summary.
    pub summary: Map<String, Value>,
    pub status: Status,
}

impl Report {
    pub fn table(columns: Vec<&'static str>, rows: Vec<Vec<String>>, line: String) -> Self {
        Self {
            columns,
            rows,
            document: None,
            line,
            summary: Map::new(),
            status: Status::Complete,
        }
    }

    pub fn document(doc: Value, line: String) -> Self {
        Self {
            columns: Vec::new(),
            rows: Vec::new(),
            document: Some(doc),
            line,
            summary: Map::new(),
            status: Status::Complete,
        }
    }

    pub fn with_summary(mut self, summary: Value) -> Self {
        if let Value::Object(m) = summary {
            self.summary = m;
        }
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }
}

pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub report: Report,
}

/// Hex SHA-256 of the command and its effective configuration. Object keys
/// serialize in sorted order, so the hash is canonical.
pub fn config_hash(command: &str, config: &Value) -> String {
    let canonical = json!({ "command": command, "config": config }).to_string();
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Shortest round-trip form; exponent notation outside [1e-5, 1e16).
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes the table (or document) and the optional JSON summary.
pub fn write(outcome: &Outcome, out: Option<&Path>, summary: Option<&Path>) -> CliResult<()> {
    let Outcome {
        command,
        config,
        report,
    } = outcome;
    let hash = config_hash(command, config);
    let mut w = sink(out)?;
    match &report.document {
        Some(doc) => {
            let mut doc = doc.clone();
            if let Value::Object(m) = &mut doc {
                m.insert(
                    "header".into(),
                    json!({ "command": command, "config_sha256": hash, "config": config, "status": report.status.label() }),
                );
            }
            serde_json::to_writer_pretty(&mut w, &doc)
                .map_err(|e| crate::config::CliError::Io(e.to_string()))?;
            writeln!(w)?;
        }
        None => {
            writeln!(w, "# nodal-lab {command}")?;
            writeln!(w, "# config-sha256: {hash}")?;
            writeln!(w, "# config: {config}")?;
            writeln!(w, "# status: {}", report.status.label())?;
            let mut csv = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut w);
            csv.write_record(&report.columns)?;
            for row in &report.rows {
                csv.write_record(row)?;
            }
            csv.flush()?;
        }
    }
    w.flush()?;
    if let Some(path) = summary {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(command));
        doc.insert("config_sha256".into(), json!(hash));
        doc.insert("config".into(), config.clone());
        doc.insert("status".into(), json!(report.status.label()));
        doc.insert("summary".into(), json!(report.line));
        doc.extend(report.summary.clone());
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut f, &Value::Object(doc))
            .map_err(|e| crate::config::CliError::Io(e.to_string()))?;
        writeln!(f)?;
        f.flush()?;
    }
    eprintln!(
        "nodal-lab {command}: {} [{}]",
        report.line,
        report.status.label()
    );
    Ok(())
}
