//! Deterministic CSV and JSON emission. Every file embeds the SHA-256 of
//! the raw config bytes and the tolerance set in force, and all floats are
//! printed with 17 significant digits so identical configs produce
//! byte-identical outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

/// 17-significant-digit scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(config_hash: &str, meta: &[(&str, String)]) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, "# config_sha256 = {config_hash}");
        for (k, v) in meta {
            let _ = writeln!(buf, "# {k} = {v}");
        }
        Self { buf }
    }

    pub fn header(&mut self, columns: &[&str]) {
        let _ = writeln!(self.buf, "{}", columns.join(","));
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        fs::write(path, self.buf.as_bytes())
            .with_context(|| format!("writing {}", path.display()))
    }
}

/// JSON report wrapper: { "meta": {...}, "report": ... } with stable field
/// order (structs serialize in declaration order).
#[derive(Serialize)]
pub struct JsonReport<T: Serialize> {
    pub meta: Meta,
    pub report: T,
}

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub config_sha256: String,
    pub subcommand: String,
}

pub fn write_json<T: Serialize>(
    path: &Path,
    config_hash: &str,
    subcommand: &str,
    report: T,
) -> anyhow::Result<()> {
    let wrapped = JsonReport {
        meta: Meta {
            tool: "photonwm",
            config_sha256: config_hash.to_string(),
            subcommand: subcommand.to_string(),
        },
        report,
    };
    let mut text = serde_json::to_string_pretty(&wrapped)?;
    text.push('\n');
    fs::write(path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))
}
