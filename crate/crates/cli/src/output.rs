//! CSV emission: header row, full-precision numeric columns, `#`-prefixed
//! metadata lines carrying the config hash and seed.

use crate::config::CliConfig;
use crate::sweep::SweepTable;
use sha2::{Digest, Sha256};

/// Full-precision rendering: 17 significant digits round-trip any f64.
pub fn format_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Short provenance hash of the canonical config rendering.
pub fn config_hash(config: &CliConfig) -> String {
    let digest = Sha256::digest(config.canonical_string().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn metadata_lines(config: &CliConfig, comments: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# config_hash={}\n", config_hash(config)));
    out.push_str(&format!("# seed={}\n", config.seed));
    out.push_str(&format!("# trials={}\n", config.trials));
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out
}

/// One evaluated quantity of a `run` invocation.
pub struct RunRow {
    pub quantity: &'static str,
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
    pub runtime_s: f64,
}

pub fn emit_run(config: &CliConfig, rows: &[RunRow]) -> String {
    let mut out = metadata_lines(config, &[]);
    out.push_str("quantity,mean,std_error,trials,runtime_s\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.quantity,
            format_full(r.mean),
            format_full(r.std_error),
            r.trials,
            format_full(r.runtime_s)
        ));
    }
    out
}

pub fn emit_sweep(config: &CliConfig, table: &SweepTable, comments: &[String]) -> String {
    let mut all_comments = comments.to_vec();
    all_comments.push(format!("runtime_s={}", format_full(table.runtime_s)));
    let mut out = metadata_lines(config, &all_comments);
    out.push_str(table.variable.name());
    for label in &table.column_labels {
        out.push_str(&format!(",{label},{label}_se"));
    }
    out.push('\n');
    for (x, row) in table.grid.iter().zip(&table.rows) {
        out.push_str(&format_full(*x));
        for cell in row {
            out.push_str(&format!(",{},{}", format_full(cell.mean), format_full(cell.std_error)));
        }
        out.push('\n');
    }
    out
}

/// Parsed CSV body: metadata comments, header fields, numeric-ish records.
pub struct ParsedCsv {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub records: Vec<Vec<String>>,
}

/// Minimal strict reader for the files this module emits.
pub fn parse_csv(text: &str) -> Result<ParsedCsv, String> {
    let mut comments = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut records = Vec::new();
    for line in text.lines() {
        if line.is_empty() {
            continue;
        }
        if let Some(stripped) = line.strip_prefix('#') {
            comments.push(stripped.trim().to_string());
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
        match header {
            None => header = Some(fields),
            Some(ref h) => {
                if fields.len() != h.len() {
                    return Err(format!(
                        "record has {} fields, header has {}",
                        fields.len(),
                        h.len()
                    ));
                }
                records.push(fields);
            }
        }
    }
    Ok(ParsedCsv {
        comments,
        header: header.ok_or("missing header row")?,
        records,
    })
}
