//! Point-set and line-arrangement readers.

use std::fs;
use std::path::Path;

use anglebound::ef::LineArrangement;
use anglebound::{PointSet, UnitVector};
use serde_json::Value;

/// Reads a point set from JSON (`{"dim":..,"points":[..]}` or a bare array of
/// coordinate rows) or, for `.csv` files, headerless rows of coordinates.
pub fn read_point_set(path: &Path) -> Result<PointSet, String> {
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let rows = if is_csv {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| format!("{}: {e}", path.display()))?;
            let row = record
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| format!("{}: row {}: {e}", path.display(), line + 1))?;
            rows.push(row);
        }
        rows
    } else {
        let text = read(path)?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if value.is_object() {
            return serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()));
        }
        serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?
    };
    let dim = rows.first().map_or(0, Vec::len);
    PointSet::from_coords(dim, rows).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads lines from an arrangement or covering JSON, or a bare array of
/// direction vectors. Directions are normalized and the minimum angle is
/// recomputed.
pub fn read_lines(path: &Path) -> Result<LineArrangement, String> {
    let text = read(path)?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(inner) = value.get("arrangement") {
        value = inner.clone();
    }
    if let Some(lines) = value.get("lines") {
        value = lines.clone();
    }
    let dirs: Vec<Vec<f64>> =
        serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
    let dim = dirs.first().map_or(0, Vec::len);
    let lines = dirs
        .iter()
        .map(|d| UnitVector::normalize(d))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    LineArrangement::new(dim, lines).map_err(|e| format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}
