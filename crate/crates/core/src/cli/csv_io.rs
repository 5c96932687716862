use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Reads a CSV file with a header row and one time step per line.
/// Returns the header names and one row per variable. Empty cells become NaN.
pub fn parse_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_csv_str(&text)
}

pub fn parse_csv_str(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    if text.trim().is_empty() {
        return Err(Error::EmptyFile);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| malformed(&e, 1))?
        .iter()
        .map(str::to_string)
        .collect();
    let d = names.len();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); d];
    for record in reader.records() {
        let record = record.map_err(|e| malformed(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        for (j, cell) in record.iter().enumerate() {
            let v = if cell.is_empty() {
                f64::NAN
            } else {
                cell.parse::<f64>().map_err(|_| Error::Malformed {
                    line,
                    msg: format!("non-numeric cell '{cell}' in column '{}'", names[j]),
                })?
            };
            columns[j].push(v);
        }
    }
    if columns.first().is_none_or(Vec::is_empty) {
        return Err(Error::EmptyFile);
    }
    Ok((names, columns))
}

fn malformed(e: &csv::Error, fallback_line: u64) -> Error {
    let line = match e.kind() {
        csv::ErrorKind::UnequalLengths { pos: Some(pos), .. } => pos.line(),
        _ => e.position().map_or(fallback_line, |p| p.line()),
    };
    let msg = match e.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => e.to_string(),
    };
    Error::Malformed { line, msg }
}

/// Writes rows-per-variable data as CSV with one time step per line.
/// Numbers use the shortest representation that parses back exactly.
pub fn write_csv(names: &[String], rows: &[Vec<f64>]) -> String {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = String::with_capacity(n * rows.len() * 20);
    out.push_str(&names.join(","));
    out.push('\n');
    for t in 0..n {
        for (j, r) in rows.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&r[t].to_string());
        }
        out.push('\n');
    }
    out
}
