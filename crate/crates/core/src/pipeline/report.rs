use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::records::decimal;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Failed,
}

/// One grid cell of a sweep. Coordinates that do not apply are `null`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellRecord {
    pub sweep: String,
    pub k: Option<u64>,
    pub m1: Option<u64>,
    pub eps: Option<i8>,
    #[serde(serialize_with = "decimal")]
    pub stat: BigInt,
    pub status: CellStatus,
    pub detail: String,
}

impl CellRecord {
    pub fn ok(sweep: &str, k: Option<u64>, m1: Option<u64>, eps: Option<i8>, stat: BigInt, detail: String) -> Self {
        CellRecord {
            sweep: sweep.to_string(),
            k,
            m1,
            eps,
            stat,
            status: CellStatus::Ok,
            detail,
        }
    }

    pub fn failed(sweep: &str, k: Option<u64>, m1: Option<u64>, eps: Option<i8>, detail: String) -> Self {
        CellRecord {
            sweep: sweep.to_string(),
            k,
            m1,
            eps,
            stat: BigInt::zero(),
            status: CellStatus::Failed,
            detail,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == CellStatus::Ok
    }
}

/// Result of a sweep: the extremal statistic is the maximum of the `stat`
/// fields of the successful cells.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub sweep: String,
    pub grid: String,
    pub stat: BigInt,
    pub cells: Vec<CellRecord>,
    pub failures: usize,
    pub seconds: f64,
    /// Highest working precision any cell needed.
    pub max_precision: u64,
    /// Further sweep-specific results, all as decimal strings.
    pub extras: BTreeMap<String, String>,
}

impl SweepReport {
    pub fn from_cells(sweep: &str, grid: String, cells: Vec<CellRecord>, seconds: f64, max_precision: u64) -> Self {
        let stat = cells
            .iter()
            .filter(|c| c.is_ok())
            .map(|c| c.stat.clone())
            .max()
            .unwrap_or_else(BigInt::zero);
        let failures = cells.iter().filter(|c| !c.is_ok()).count();
        SweepReport {
            sweep: sweep.to_string(),
            grid,
            stat,
            cells,
            failures,
            seconds,
            max_precision,
            extras: BTreeMap::new(),
        }
    }

    pub fn complete(&self) -> bool {
        self.failures == 0
    }

    pub fn failed_cells(&self) -> impl Iterator<Item = &CellRecord> {
        self.cells.iter().filter(|c| !c.is_ok())
    }

    /// One JSON object per cell, in grid order.
    pub fn to_jsonl(&self) -> String {
        self.cells
            .iter()
            .map(|c| serde_json::to_string(c).expect("cell records serialize") + "\n")
            .collect()
    }

    pub fn csv_header() -> &'static str {
        "sweep,grid,stat,cells,failures,seconds\n"
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},\"{}\",{},{},{},{:.3}\n",
            self.sweep,
            self.grid.replace('"', "\"\""),
            self.stat,
            self.cells.len(),
            self.failures,
            self.seconds
        )
    }
}

/// Write `contents` to a sibling temporary file and rename it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp = PathBuf::from(path);
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    tmp.set_file_name(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Summary CSV for `reports` (header only when empty) and, when `audit` is
/// set, the per-cell JSONL beside it.
pub fn emit_reports(reports: &[SweepReport], csv_path: &Path, jsonl_path: Option<&Path>) -> Result<()> {
    let mut csv = SweepReport::csv_header().to_string();
    for r in reports {
        csv.push_str(&r.to_csv_line());
    }
    write_atomic(csv_path, csv.as_bytes())?;
    if let Some(p) = jsonl_path {
        let body: String = reports.iter().map(SweepReport::to_jsonl).collect();
        write_atomic(p, body.as_bytes())?;
    }
    Ok(())
}
