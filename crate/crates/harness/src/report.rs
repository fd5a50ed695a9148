//! Merge sweep JSON reports into one document for plotting.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::HarnessError;
use crate::sweep::SweepReport;

#[derive(Debug, Serialize)]
pub struct MergedReport {
    pub schema_version: u32,
    pub sweeps: Vec<SweepReport>,
}

/// Expand inputs: files are taken as-is; directories contribute their
/// `*.json` entries in sorted order.
pub fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, HarnessError> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(input)
                .map_err(|source| HarnessError::File {
                    path: input.clone(),
                    source,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    Ok(files)
}

pub fn merge_reports(inputs: &[PathBuf]) -> Result<MergedReport, HarnessError> {
    let files = collect_inputs(inputs)?;
    let mut sweeps = Vec::with_capacity(files.len());
    for path in files {
        let text = std::fs::read_to_string(&path).map_err(|source| HarnessError::File {
            path: path.clone(),
            source,
        })?;
        let report: SweepReport =
            serde_json::from_str(&text).map_err(|e| HarnessError::Parse {
                path: path.clone(),
                message: e.to_string(),
            })?;
        sweeps.push(report);
    }
    Ok(MergedReport {
        schema_version: 1,
        sweeps,
    })
}

pub fn write_merged(merged: &MergedReport, out: &Path) -> Result<(), HarnessError> {
    let json = serde_json::to_string_pretty(merged)?;
    std::fs::write(out, json + "\n").map_err(|source| HarnessError::File {
        path: out.to_path_buf(),
        source,
    })
}
