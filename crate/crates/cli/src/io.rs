//! CSV ingestion and curve output.

use std::path::Path;

use mrl_core::estimators::CurveEstimate;

use crate::errors::{CliError, CliResult};

/// Reads one named column as f64 values. Rows whose cell is missing,
/// blank, or non-finite are dropped; the count of dropped rows comes back
/// with the values so callers can warn.
pub fn read_csv_column(path: &Path, column: &str) -> CliResult<(Vec<f64>, usize)> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| {
        CliError::Data(format!("cannot read {}: {e}", path.display()))
    })?;
    let headers = reader.headers()?.clone();
    let idx = headers
        .iter()
        .position(|h| h.trim() == column)
        .ok_or_else(|| {
            let available: Vec<&str> = headers.iter().collect();
            CliError::Data(format!(
                "column '{column}' not found in {}; available columns: {}",
                path.display(),
                available.join(", ")
            ))
        })?;

    let mut values = Vec::new();
    let mut dropped = 0usize;
    for record in reader.records() {
        let record = record?;
        match record.get(idx).map(str::trim) {
            Some(cell) if !cell.is_empty() => match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => dropped += 1,
            },
            _ => dropped += 1,
        }
    }
    if values.is_empty() {
        return Err(CliError::Data(format!(
            "column '{column}' of {} holds no usable numeric values",
            path.display()
        )));
    }
    Ok((values, dropped))
}

/// Writes one curve as `t,survival,cum_survival,mrl,flag`. Values use the
/// shortest round-trip decimal representation, so re-reading the file
/// reproduces them bit for bit.
pub fn write_curve_csv(path: &Path, curve: &CurveEstimate) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["t", "survival", "cum_survival", "mrl", "flag"])?;
    for i in 0..curve.grid.len() {
        writer.write_record([
            curve.grid[i].to_string(),
            curve.survival[i].to_string(),
            curve.cum_survival[i].to_string(),
            curve.mrl[i].to_string(),
            curve.flags[i].as_str().to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes several curves over a shared grid as one wide CSV, with
/// estimator-labelled column groups.
pub fn write_combined_csv(
    path: &Path,
    grid: &[f64],
    labelled: &[(String, &CurveEstimate)],
) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec!["t".to_string()];
    for (label, _) in labelled {
        header.push(format!("survival_{label}"));
        header.push(format!("cum_survival_{label}"));
        header.push(format!("mrl_{label}"));
        header.push(format!("flag_{label}"));
    }
    writer.write_record(&header)?;
    for (i, t) in grid.iter().enumerate() {
        let mut row = vec![t.to_string()];
        for (_, curve) in labelled {
            row.push(curve.survival[i].to_string());
            row.push(curve.cum_survival[i].to_string());
            row.push(curve.mrl[i].to_string());
            row.push(curve.flags[i].as_str().to_string());
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

