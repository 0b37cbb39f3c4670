//! Output assembly: provenance headers, JSON documents, CSV tables.
//!
//! Everything here is deterministic so that identical configs produce
//! byte-identical files. JSON objects are emitted with sorted keys and
//! serde_json's shortest round-trip number encoding; CSV cells carry 17
//! significant digits in scientific form. Complex values are `[re, im]`
//! pairs in JSON and `re+imi` strings in CSV, the form num-complex
//! parses back.

use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub config_sha256: String,
    pub seed: Option<u64>,
}

pub fn provenance(config_bytes: &[u8], seed: Option<u64>) -> Provenance {
    let digest = Sha256::digest(config_bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    Provenance {
        tool: format!("uclass {}", env!("CARGO_PKG_VERSION")),
        config_sha256: hex,
        seed,
    }
}

/// 17 significant digits in scientific form; parses back to the same bits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re+imi` at full precision, e.g. `5.0000000000000000e-1-2.5000000000000000e-1i`.
pub fn fmt_c(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "-" } else { "+" };
    format!("{}{}{}i", fmt_f(z.re), sign, fmt_f(z.im.abs()))
}

/// JSON form of a complex scalar.
pub fn jc(z: Complex64) -> Value {
    json!([z.re, z.im])
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// One finished command result, renderable as JSON or CSV.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub provenance: Provenance,
    pub data: Value,
    pub table: Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Document {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = json!({
                    "provenance": self.provenance,
                    "command": self.command,
                    "data": self.data,
                });
                let mut text =
                    serde_json::to_string_pretty(&doc).expect("document is serializable");
                text.push('\n');
                text
            }
            Format::Csv => {
                let mut text = String::new();
                text.push_str(&format!("# tool: {}\n", self.provenance.tool));
                text.push_str(&format!("# command: {}\n", self.command));
                text.push_str(&format!(
                    "# config_sha256: {}\n",
                    self.provenance.config_sha256
                ));
                match self.provenance.seed {
                    Some(s) => text.push_str(&format!("# seed: {s}\n")),
                    None => text.push_str("# seed: none\n"),
                }
                text.push_str(&self.table.columns.join(","));
                text.push('\n');
                for row in &self.table.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
                    text.push_str(&cells.join(","));
                    text.push('\n');
                }
                text
            }
        }
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

pub fn write_out(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|()| lock.flush())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}
