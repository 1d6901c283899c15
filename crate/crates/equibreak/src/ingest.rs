//! CSV ingestion and emission for every sample-space kind.
//!
//! One row per observation; the column order is part of the interface:
//!
//! | kind           | columns                          |
//! |----------------|----------------------------------|
//! | euclidean:d    | d coordinates                    |
//! | regression:k   | k carrier values, then response  |
//! | binary:k       | 0/1 response, then k covariates  |
//! | time           | time, then observation           |
//! | positive       | positive carrier, then response  |
//!
//! Numbers use the standard decimal-point syntax accepted by Rust's float
//! parser, independent of any system locale. Errors carry one-based row and
//! column positions that refer to the physical file (a skipped header row is
//! still row 1).

use crate::error::{Error, Result};
use crate::measure::{EmpiricalMeasure, Point, SampleSpaceKind};

/// Maps a CSV row (in interface column order) to an internal point.
fn row_to_point(kind: SampleSpaceKind, mut row: Vec<f64>) -> Point {
    if kind == SampleSpaceKind::TimePair {
        // Stored as (observation, time); the file carries time first.
        row.swap(0, 1);
    }
    row
}

/// Maps an internal point back to a CSV row (the swap is its own inverse).
fn point_to_row(kind: SampleSpaceKind, point: Point) -> Vec<f64> {
    row_to_point(kind, point)
}

/// Parses CSV text into an empirical measure with equal weights.
pub fn ingest_str(text: &str, kind: SampleSpaceKind, has_header: bool) -> Result<EmpiricalMeasure> {
    let expected = kind.point_dim();
    let mut points: Vec<Point> = Vec::new();
    // Physical row numbers of the parsed points, for error reporting.
    let mut rows: Vec<usize> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        if has_header && i == 0 {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != expected {
            return Err(Error::RowShape {
                row,
                expected,
                got: cells.len(),
            });
        }
        let mut values = Vec::with_capacity(expected);
        for (j, cell) in cells.iter().enumerate() {
            let token = cell.trim();
            let value: f64 =
                token
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or(Error::ParseNumber {
                        row,
                        col: j + 1,
                        token: token.to_string(),
                    })?;
            values.push(value);
        }
        points.push(row_to_point(kind, values));
        rows.push(row);
    }
    EmpiricalMeasure::from_points(points, kind).map_err(|e| match e {
        // Domain violations are detected per point; report the source row.
        Error::PointDomain { index, reason } => Error::PointDomain {
            index: rows[index],
            reason: format!("row {}: {}", rows[index], reason),
        },
        other => other,
    })
}

/// Reads and parses a CSV file.
pub fn ingest_file(
    path: &std::path::Path,
    kind: SampleSpaceKind,
    has_header: bool,
) -> Result<EmpiricalMeasure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ingest_str(&text, kind, has_header)
}

/// Writes an equally weighted measure back to CSV text (no header row).
/// Floats are printed in shortest round-trip form, so
/// `ingest_str(emit(p)?, p.kind(), false)` reproduces `p` exactly.
pub fn emit(p: &EmpiricalMeasure) -> Result<String> {
    let n = p.len();
    let uniform = 1.0 / n as f64;
    if p.weights().iter().any(|&w| w != uniform) {
        return Err(Error::InvalidArgument {
            what: "only equally weighted samples can be written as csv".into(),
        });
    }
    let mut out = String::new();
    for point in p.points() {
        let row = point_to_row(p.kind(), point.clone());
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}
