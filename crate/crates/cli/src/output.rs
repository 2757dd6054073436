use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::{CliError, CliResult};

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })
}

/// Writes a header plus numeric rows (shortest round-trip formatting).
pub fn write_csv<H, R>(path: &Path, header: &[H], rows: R) -> CliResult<PathBuf>
where
    H: AsRef<str>,
    R: IntoIterator<Item = Vec<f64>>,
{
    let wrap = |source| CliError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(wrap)?;
    w.write_record(header.iter().map(|h| h.as_ref())).map_err(wrap)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:?}"))).map_err(wrap)?;
    }
    w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(path.to_path_buf())
}

/// Writes `name,value` pairs.
pub fn write_pairs(path: &Path, header: [&str; 2], rows: &[(&str, f64)]) -> CliResult<PathBuf> {
    let wrap = |source| CliError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(wrap)?;
    w.write_record(header).map_err(wrap)?;
    for (k, v) in rows {
        w.write_record([k.to_string(), format!("{v:?}")]).map_err(wrap)?;
    }
    w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(path.to_path_buf())
}

pub fn write_json(path: &Path, value: &Value) -> CliResult<PathBuf> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(path.to_path_buf())
}
