//! Trajectory files: CSV with a fixed header, or JSON with the same columns.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use chazy::C64;
use serde::{Deserialize, Serialize};

pub const TRIPLE_HEADER: [&str; 7] = ["x", "P_re", "P_im", "Q_re", "Q_im", "R_re", "R_im"];
pub const HALPHEN_HEADER: [&str; 7] = ["x", "w1_re", "w1_im", "w2_re", "w2_im", "w3_re", "w3_im"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Samples `(x, [z1, z2, z3])` in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub xs: Vec<f64>,
    pub states: Vec<[C64; 3]>,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    columns: Vec<String>,
    rows: Vec<[f64; 7]>,
}

fn row(x: f64, s: &[C64; 3]) -> [f64; 7] {
    [x, s[0].re, s[0].im, s[1].re, s[1].im, s[2].re, s[2].im]
}

fn from_row(r: [f64; 7]) -> (f64, [C64; 3]) {
    (
        r[0],
        [
            C64::new(r[1], r[2]),
            C64::new(r[3], r[4]),
            C64::new(r[5], r[6]),
        ],
    )
}

/// Write with 17 significant digits so that reading back is bit exact.
pub fn write_table(path: &Path, header: &[&str; 7], table: &Table, format: Format) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for (x, s) in table.xs.iter().zip(&table.states) {
                w.write_record(row(*x, s).iter().map(|v| format!("{v:.16e}")))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let json = JsonTable {
                columns: header.iter().map(|s| s.to_string()).collect(),
                rows: table
                    .xs
                    .iter()
                    .zip(&table.states)
                    .map(|(x, s)| row(*x, s))
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut out, &json)?;
            writeln!(out)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Read a table written by [`write_table`]; the format is detected from the
/// content and the header must match `header` exactly.
pub fn read_table(path: &Path, header: &[&str; 7]) -> Result<Table> {
    let mut text = String::new();
    File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?
        .read_to_string(&mut text)?;
    let rows: Vec<[f64; 7]> = if text.trim_start().starts_with('{') {
        let json: JsonTable = serde_json::from_str(&text).context("malformed JSON trajectory")?;
        if json.columns != header {
            bail!(
                "unexpected columns {:?}, expected {:?}",
                json.columns,
                header
            );
        }
        json.rows
    } else {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let got: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        if got != header {
            bail!(
                "unexpected CSV header '{}', expected '{}'",
                got.join(","),
                header.join(",")
            );
        }
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.with_context(|| format!("malformed CSV row {}", i + 2))?;
            let mut vals = [0.0; 7];
            for (slot, field) in vals.iter_mut().zip(rec.iter()) {
                *slot = field
                    .trim()
                    .parse()
                    .with_context(|| format!("row {}: invalid number '{field}'", i + 2))?;
            }
            rows.push(vals);
        }
        rows
    };
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        bail!("trajectory contains non-finite values");
    }
    let (xs, states) = rows.into_iter().map(from_row).unzip();
    Ok(Table { xs, states })
}
