//! Report envelope and output formats.

use std::path::Path;
use std::time::Duration;

use anyhow::Context;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything one command produced, before formatting.
#[derive(Debug)]
pub struct Output {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub text: String,
    pub table: Table,
    /// Extra artifacts written next to the report when an output directory is set.
    pub files: Vec<(String, String)>,
    /// A per-instance error occurred; the process exits nonzero.
    pub failed: bool,
}

impl Output {
    pub fn new(command: &'static str, config: Value, result: Value) -> Self {
        Output {
            command,
            config,
            result,
            text: String::new(),
            table: Table::default(),
            files: Vec::new(),
            failed: false,
        }
    }
}

pub fn envelope(out: &Output, timing: Option<Duration>) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "puremono",
        "version": env!("CARGO_PKG_VERSION"),
        "command": out.command,
        "config": out.config,
        "result": out.result,
    });
    if let Some(t) = timing {
        v["timing_ms"] = json!(t.as_secs_f64() * 1000.0);
    }
    v
}

pub fn render(out: &Output, format: Format, timing: Option<Duration>) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(out, timing))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.table.header)?;
            for row in &out.table.rows {
                w.write_record(row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut s = out.text.clone();
            if let Some(t) = timing {
                s.push_str(&format!("elapsed: {:.3} ms\n", t.as_secs_f64() * 1000.0));
            }
            s
        }
    })
}

/// Prints to stdout, or writes `<command>.<ext>` plus artifacts into `dir`.
pub fn emit(out: &Output, format: Format, timing: Option<Duration>, dir: Option<&Path>) -> anyhow::Result<()> {
    let body = render(out, format, timing)?;
    match dir {
        None => print!("{body}"),
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(format!("{}.{}", out.command, format.extension()));
            std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            for (name, content) in &out.files {
                let path = dir.join(name);
                std::fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
