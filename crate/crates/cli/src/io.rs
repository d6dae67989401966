//! CSV/JSON readers and writers for the file formats the CLI exchanges:
//! single-column samples, coefficient rows, data-point matrices, tabulated
//! Orlicz functions, and discrete function models.

use std::path::Path;

use crate::{CliError, CliResult};
use tailbound_core::functional::DiscreteFunctionModel;

fn open_reader(path: &Path) -> CliResult<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file))
}

fn parse_field(raw: &str, path: &Path) -> CliResult<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("bad number {raw:?} in {}", path.display())))
}

fn is_numeric(raw: &str) -> bool {
    raw.trim().parse::<f64>().is_ok()
}

/// Single-column CSV of samples. A non-numeric first line is treated as a
/// header and skipped.
pub fn read_samples(path: &Path) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for (i, record) in open_reader(path)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(e.to_string()))?;
        let field = record
            .get(0)
            .ok_or_else(|| CliError::Config(format!("empty row in {}", path.display())))?;
        if i == 0 && !is_numeric(field) {
            continue;
        }
        out.push(parse_field(field, path)?);
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{} holds no samples", path.display())));
    }
    Ok(out)
}

/// Write samples as a single-column CSV with a header row.
pub fn write_samples(path: &Path, samples: &[f64]) -> CliResult<()> {
    let mut body = String::from("value\n");
    for s in samples {
        body.push_str(&crate::report::fmt_sig(*s));
        body.push('\n');
    }
    std::fs::write(path, body)?;
    Ok(())
}

/// A coefficient vector stored as one CSV row.
pub fn read_coefficient_row(path: &Path) -> CliResult<Vec<f64>> {
    let mut reader = open_reader(path)?;
    let record = reader
        .records()
        .next()
        .ok_or_else(|| CliError::Config(format!("{} is empty", path.display())))?
        .map_err(|e| CliError::Config(e.to_string()))?;
    record.iter().map(|f| parse_field(f, path)).collect()
}

/// Data points, one row per point. A non-numeric first row is a header.
pub fn read_points(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (i, record) in open_reader(path)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(e.to_string()))?;
        if i == 0 && record.iter().any(|f| !is_numeric(f)) {
            continue;
        }
        let row: CliResult<Vec<f64>> = record.iter().map(|f| parse_field(f, path)).collect();
        out.push(row?);
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{} holds no points", path.display())));
    }
    let dim = out[0].len();
    if out.iter().any(|r| r.len() != dim) {
        return Err(CliError::Config(format!(
            "rows of {} have inconsistent lengths",
            path.display()
        )));
    }
    Ok(out)
}

/// A square matrix stored row-per-row; returns (flat row-major data, dim).
pub fn read_matrix(path: &Path) -> CliResult<(Vec<f64>, usize)> {
    let rows = read_points(path)?;
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::Config(format!("{} is not square", path.display())));
    }
    Ok((rows.into_iter().flatten().collect(), dim))
}

/// Tabulated Orlicz function: CSV of `(x, phi(x))` pairs, strictly
/// increasing `x >= 0`, starting at `(0, 0)`. A header row is skipped.
pub fn read_phi_knots(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (i, record) in open_reader(path)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(e.to_string()))?;
        if record.len() < 2 {
            return Err(CliError::Config(format!(
                "{} row {} needs two columns (x, phi)",
                path.display(),
                i + 1
            )));
        }
        if i == 0 && !is_numeric(&record[0]) {
            continue;
        }
        out.push((parse_field(&record[0], path)?, parse_field(&record[1], path)?));
    }
    Ok(out)
}

/// Discrete function model from JSON: supports plus a named builtin or a
/// tabulated function.
pub fn read_function_model(path: &Path) -> CliResult<DiscreteFunctionModel> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    let model: DiscreteFunctionModel = serde_json::from_str(&raw)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    // re-validate through the constructor
    DiscreteFunctionModel::new(model.supports, model.f).map_err(CliError::from)
}
