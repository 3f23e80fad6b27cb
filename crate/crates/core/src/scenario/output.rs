//! CSV time series and curves, ASCII grid snapshots.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::ScenarioError;
use crate::ca::{CellState, SimState, TimeSeriesRecord};

fn csv_err(path: &Path, e: csv::Error) -> ScenarioError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => ScenarioError::invalid(path.display().to_string(), format!("{other:?}")),
    }
}

/// Writes one row per record. An empty series still gets the header.
pub fn write_timeseries(path: impl AsRef<Path>, records: &[TimeSeriesRecord]) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    w.write_record([
        "step",
        "clock_min",
        "burning_cells",
        "burned_cells",
        "water_cells",
        "burned_area_m2",
    ])
    .map_err(|e| csv_err(path, e))?;
    for r in records {
        w.serialize(r).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(ScenarioError::io(path))
}

pub fn read_timeseries(path: impl AsRef<Path>) -> Result<Vec<TimeSeriesRecord>, ScenarioError> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    r.deserialize().map(|rec| rec.map_err(|e| csv_err(path, e))).collect()
}

/// One row per grid row, cell states as digits.
pub fn write_snapshot(path: impl AsRef<Path>, state: &SimState) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    let mut text = String::with_capacity(state.rows * (state.cols + 1));
    for row in state.cells.chunks(state.cols) {
        text.extend(row.iter().map(|c| c.digit()));
        text.push('\n');
    }
    fs::write(path, text).map_err(ScenarioError::io(path))
}

/// Reads a snapshot back as a row-major grid.
pub fn read_snapshot(path: impl AsRef<Path>) -> Result<Vec<Vec<CellState>>, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(ScenarioError::io(path))?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            line.chars()
                .map(|c| {
                    CellState::from_digit(c).ok_or_else(|| {
                        ScenarioError::invalid(path.display().to_string(), format!("bad cell {c:?} on line {}", i + 1))
                    })
                })
                .collect()
        })
        .collect()
}

/// A family of y(x) series sharing one x column.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub x_label: String,
    pub labels: Vec<String>,
    /// Each row holds x followed by one value per label.
    pub rows: Vec<Vec<f64>>,
}

impl Curve {
    pub fn new(x_label: impl Into<String>, labels: Vec<String>) -> Self {
        Self {
            x_label: x_label.into(),
            labels,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let i = self.labels.iter().position(|l| l == label)? + 1;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn xs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }
}

pub fn write_curve(path: impl AsRef<Path>, curve: &Curve) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = std::iter::once(curve.x_label.as_str()).chain(curve.labels.iter().map(String::as_str));
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in &curve.rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(ScenarioError::io(path))
}

pub fn read_curve(path: impl AsRef<Path>) -> Result<Curve, ScenarioError> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let headers = r.headers().map_err(|e| csv_err(path, e))?.clone();
    let mut curve = Curve::new(
        headers.get(0).unwrap_or(""),
        headers.iter().skip(1).map(String::from).collect(),
    );
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| ScenarioError::invalid(path.display().to_string(), format!("{s:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        curve.rows.push(row);
    }
    Ok(curve)
}

/// Writes a small text file, creating parent directories.
pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(ScenarioError::io(dir))?;
    }
    let mut f = fs::File::create(path).map_err(ScenarioError::io(path))?;
    f.write_all(text.as_bytes()).map_err(ScenarioError::io(path))
}
