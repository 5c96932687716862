//! Reads a CSV file (header row of names, one column per variable) and
//! prints the flow matrix as JSON.
//!
//! cargo run --example analyze_csv -- data.csv 0.01

use std::path::PathBuf;

use infoflow::cli::parse_csv;
use infoflow::graph::emit_json;
use infoflow::{all_pairs, validate_series_set, AnalysisOptions, NanPolicy};

fn main() -> infoflow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = match args.next() {
        Some(p) => PathBuf::from(p),
        None => {
            eprintln!("usage: analyze_csv <file.csv> [dt]");
            std::process::exit(2);
        }
    };
    let dt = args.next().map_or(Ok(1.0), |s| s.parse::<f64>()).unwrap_or_else(|e| {
        eprintln!("bad dt: {e}");
        std::process::exit(2);
    });

    let (names, columns) = parse_csv(&path)?;
    let set = validate_series_set(columns, names, dt, NanPolicy::Interpolate)?;
    let fm = all_pairs(&set, &AnalysisOptions::default())?;
    print!("{}", emit_json(&fm)?);
    Ok(())
}
