//! JSON and CSV result files with a metadata header.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::outcome::OutcomeDistribution;

/// Run description embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub engines: Vec<String>,
    /// Effective configuration, already rendered (e.g. as TOML).
    pub config: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub parameters: Vec<(String, f64)>,
    pub outcome: String,
    pub value: f64,
    pub engine: String,
    pub seed: Option<u64>,
}

impl ResultRow {
    /// One row per outcome of `dist`, in outcome order.
    pub fn from_distribution(dist: &OutcomeDistribution, parameters: &[(&str, f64)]) -> Vec<ResultRow> {
        dist.outcomes()
            .iter()
            .map(|(o, p)| ResultRow {
                parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                outcome: o.to_string(),
                value: *p,
                engine: dist.provenance().to_string(),
                seed: dist.parameters().seed,
            })
            .collect()
    }
}

/// `x` with `digits` significant digits in positional notation, or in
/// exponent notation when that would need more than 15 leading or trailing
/// zeros.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let exponent = x.abs().log10().floor() as i32;
    if !(-15..=15).contains(&exponent) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.trim_start_matches('-').trim_start_matches(['0', '.']).is_empty() {
        "0".to_string()
    } else {
        s
    }
}

/// Metadata as text lines, without comment markers.
pub fn metadata_lines(meta: &Metadata) -> Vec<String> {
    let mut lines = vec![
        format!("{} {}", meta.tool, meta.version),
        format!("seed: {}", meta.seed),
        format!("engines: {}", meta.engines.join(",")),
    ];
    lines.extend(meta.config.lines().map(|l| format!("config: {l}")));
    lines
}

/// CSV with `#`-prefixed metadata lines, then one row per result. The
/// parameter columns are taken from the first row.
pub fn write_csv<W: Write>(out: W, meta: &Metadata, rows: &[ResultRow], value_column: &str) -> io::Result<()> {
    let mut out = out;
    for line in metadata_lines(meta) {
        writeln!(out, "# {line}")?;
    }
    let names: Vec<&str> = rows
        .first()
        .map(|r| r.parameters.iter().map(|(k, _)| k.as_str()).collect())
        .unwrap_or_default();
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = names.clone();
    header.extend(["outcome", value_column, "engine", "seed"]);
    writer.write_record(&header)?;
    for row in rows {
        let mut record: Vec<String> = row.parameters.iter().map(|(_, v)| format_significant(*v, 12)).collect();
        record.push(row.outcome.clone());
        record.push(format_significant(row.value, 12));
        record.push(row.engine.clone());
        record.push(row.seed.map(|s| s.to_string()).unwrap_or_default());
        writer.write_record(&record)?;
    }
    writer.flush()
}

pub fn write_json<W: Write>(mut out: W, meta: &Metadata, rows: &[ResultRow], value_column: &str) -> io::Result<()> {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut entry = Map::new();
            let params: Map<String, Value> = r.parameters.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            entry.insert("parameters".into(), Value::Object(params));
            entry.insert("outcome".into(), json!(r.outcome));
            entry.insert(value_column.into(), json!(r.value));
            entry.insert("engine".into(), json!(r.engine));
            entry.insert("seed".into(), json!(r.seed));
            Value::Object(entry)
        })
        .collect();
    let doc = json!({ "metadata": meta, "rows": rows });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}
