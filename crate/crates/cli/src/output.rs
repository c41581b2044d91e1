use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "txt",
        }
    }
}

/// What a verb produced: a JSON document, a flat table view of it, and
/// whether its verdict passed.
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub verdict: bool,
    /// Side document written next to tabular output (`<out>.summary.json`).
    pub summary: Option<Value>,
}

impl Report {
    pub fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report { json, header: header.iter().map(|s| s.to_string()).collect(), rows, verdict: true, summary: None }
    }

    pub fn verdict(mut self, ok: bool) -> Self {
        self.verdict = ok;
        self
    }

    pub fn summary(mut self, v: Value) -> Self {
        self.summary = Some(v);
        self
    }
}

/// `{"schema_version": 1, ...}` from a serializable value; non-objects land under `"result"`.
pub fn versioned(v: &impl Serialize) -> Result<Value, CliError> {
    let inner = serde_json::to_value(v).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut map = Map::new();
    map.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    match inner {
        Value::Object(o) => map.extend(o),
        other => {
            map.insert("result".into(), other);
        }
    }
    Ok(Value::Object(map))
}

fn render_csv(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Output(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = header.iter().map(|h| width(h)).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(width(c));
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - width(c)))).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut v = report.json.clone();
            if let (Value::Object(o), Some(s)) = (&mut v, &report.summary) {
                o.insert("summary".into(), s.clone());
            }
            Ok(serde_json::to_string_pretty(&v).map_err(|e| CliError::Output(e.to_string()))? + "\n")
        }
        Format::Csv => render_csv(&report.header, &report.rows),
        Format::Table => Ok(render_table(&report.header, &report.rows)),
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Output(e.to_string()))?;
    tmp.write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))?;
    tmp.persist(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Relative paths resolve against `out_dir`; with no explicit path and an
/// `out_dir`, the file is `<out_dir>/<verb>.<ext>`; otherwise stdout.
pub fn target(out: Option<&Path>, out_dir: Option<&Path>, verb: &str, format: Format) -> Option<PathBuf> {
    match (out, out_dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(format!("{verb}.{}", format.extension()))),
        (None, None) => None,
    }
}

pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let text = render(report, format)?;
    let tabular = format != Format::Json;
    match path {
        Some(p) => {
            write_atomic(p, &text)?;
            if let (true, Some(s)) = (tabular, &report.summary) {
                let mut name = p.as_os_str().to_owned();
                name.push(".summary.json");
                let body = serde_json::to_string_pretty(s).map_err(|e| CliError::Output(e.to_string()))? + "\n";
                write_atomic(Path::new(&name), &body)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))?;
            if let (true, Some(s)) = (tabular, &report.summary) {
                eprintln!("{}", serde_json::to_string(s).map_err(|e| CliError::Output(e.to_string()))?);
            }
        }
    }
    Ok(())
}
