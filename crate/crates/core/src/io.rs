//! Dataset files and atomic output.
//!
//! A dataset file is comma-separated text. The header lists object labels,
//! optionally followed by a `weight` column. Every data row holds one rank
//! per object; `-` or an empty cell marks an unranked object. Without a
//! weight column every row has weight 1.
//!
//! ```text
//! A,B,C,weight
//! 2,1,3,12
//! 1,-,2,5
//! ```

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::dataset::RankingDataset;
use crate::error::{Error, Result};
use crate::ranking::{Labels, Ranking};

pub const MISSING_TOKEN: &str = "-";
pub const WEIGHT_COLUMN: &str = "weight";

pub fn parse_dataset(path: impl AsRef<Path>) -> Result<RankingDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_dataset_str(&text)
}

fn cells(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

pub fn parse_dataset_str(text: &str) -> Result<RankingDataset> {
    let mut lines = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        row: 0,
        column: String::new(),
        message: "empty file".into(),
    })?;
    let mut names = cells(header);
    let has_weight = names
        .last()
        .is_some_and(|n| n.eq_ignore_ascii_case(WEIGHT_COLUMN));
    if has_weight {
        names.pop();
    }
    let labels = Labels::new(names.iter().copied()).map_err(|e| Error::Parse {
        row: 0,
        column: String::new(),
        message: e.to_string(),
    })?;
    let m = labels.len();
    let width = m + usize::from(has_weight);

    let mut rows = Vec::new();
    for (row_no, (_, line)) in lines.enumerate() {
        let row = row_no + 1;
        let fields = cells(line);
        if fields.len() != width {
            return Err(Error::Parse {
                row,
                column: String::new(),
                message: format!("expected {width} fields, found {}", fields.len()),
            });
        }
        let mut ranks = Vec::with_capacity(m);
        for (j, cell) in fields[..m].iter().enumerate() {
            let err = |message: String| Error::Parse {
                row,
                column: labels.get(j).to_string(),
                message,
            };
            if cell.is_empty() || *cell == MISSING_TOKEN {
                ranks.push(None);
                continue;
            }
            let v: u32 = cell
                .parse()
                .map_err(|_| err(format!("`{cell}` is not a non-negative integer rank")))?;
            if v == 0 {
                return Err(err("rank values must be positive".into()));
            }
            ranks.push(Some(v));
        }
        let weight = if has_weight {
            let cell = fields[m];
            let err = |message: String| Error::Parse {
                row,
                column: WEIGHT_COLUMN.to_string(),
                message,
            };
            let w: f64 = cell
                .parse()
                .map_err(|_| err(format!("`{cell}` is not a number")))?;
            if !(w.is_finite() && w > 0.0) {
                return Err(err(format!("weight must be positive, got {cell}")));
            }
            w
        } else {
            1.0
        };
        let ranking = Ranking::new(labels.clone(), ranks).map_err(|e| Error::Parse {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        rows.push((ranking, weight));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            row: 1,
            column: String::new(),
            message: "no data rows".into(),
        });
    }
    RankingDataset::new(labels, rows)
}

fn format_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        format!("{w:.0}")
    } else {
        format!("{w}")
    }
}

/// Canonical text form: dense ranks, `-` for unranked, explicit weights.
pub fn dataset_to_string(d: &RankingDataset) -> String {
    let mut out = String::new();
    let header: Vec<&str> = d.labels().as_slice().iter().map(String::as_str).collect();
    let _ = writeln!(out, "{},{WEIGHT_COLUMN}", header.join(","));
    for (r, w) in d.rows() {
        let cells: Vec<String> = r
            .canonicalize()
            .ranks()
            .iter()
            .map(|v| v.map_or_else(|| MISSING_TOKEN.to_string(), |v| v.to_string()))
            .collect();
        let _ = writeln!(out, "{},{}", cells.join(","), format_weight(*w));
    }
    out
}

/// Hex SHA-256 of the dataset's canonical text form.
pub fn dataset_digest(d: &RankingDataset) -> String {
    hex::encode(Sha256::digest(dataset_to_string(d).as_bytes()))
}

pub fn write_dataset(path: impl AsRef<Path>, d: &RankingDataset) -> Result<()> {
    write_atomic(path, dataset_to_string(d).as_bytes())
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
