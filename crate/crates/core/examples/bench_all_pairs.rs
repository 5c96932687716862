//! Times the full all-pairs analysis (30 variables, 10^4 samples) with one
//! worker and with the default pool.

use infoflow::cli::{run_bench, BenchConfig};

fn main() -> infoflow::Result<()> {
    for workers in [1, 0] {
        let report = run_bench(&BenchConfig {
            workers,
            ..BenchConfig::default()
        })?;
        println!(
            "workers={workers}: {} flows + {} self terms, median {:.3}s, min {:.3}s [{}]",
            report.relations, report.self_terms, report.median_seconds, report.min_seconds, report.status
        );
    }
    Ok(())
}
