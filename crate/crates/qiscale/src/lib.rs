//! File formats and the batch experiment runner behind the `qiscale` binary.

pub mod config;
pub mod error;
pub mod formats;
pub mod run;

use std::fs;
use std::path::Path;

pub use config::Cli;
pub use error::CliError;
pub use run::{execute, Report};

/// Writes `report.json`, `rows.csv` and any exported files into `dir`.
pub fn write_outputs(dir: &Path, report: &Report) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), render(&report.json))?;
    let mut csv = csv::Writer::from_path(dir.join("rows.csv"))?;
    if let Some(table) = &report.rows {
        csv.write_record(&table.header)?;
        for row in &table.rows {
            csv.write_record(row)?;
        }
    }
    csv.flush()?;
    for (name, contents) in &report.files {
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

/// Pretty JSON with a trailing newline. Keys are sorted, so equal reports
/// render to equal bytes.
pub fn render(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
