//! Serialization of results: JSON reports, CSV matrices with a
//! point-list header. Floats are written with shortest round-trip
//! formatting so reruns are bitwise comparable.

use std::fmt::Write as _;
use std::path::Path;

use nulldist_core::engine::DistanceMatrix;
use nulldist_core::metric::FiniteMetricSpace;
use nulldist_core::spacetime::SpacetimePoint;

use crate::CliError;

fn fmt_f64(x: f64) -> String {
    // {:?} prints the shortest representation that round-trips
    format!("{x:?}")
}

fn point_header(points: &[SpacetimePoint]) -> String {
    let mut s = String::from("# points:");
    for p in points {
        let coords: Vec<String> = p.x.coords.iter().map(|c| fmt_f64(*c)).collect();
        let _ = write!(s, " ({},{})", fmt_f64(p.t), coords.join(","));
    }
    s.push('\n');
    s
}

pub fn matrix_csv(points: &[SpacetimePoint], matrix: &[Vec<f64>]) -> String {
    let mut s = point_header(points);
    for row in matrix {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn write_matrix_csv(path: &Path, dm: &DistanceMatrix) -> Result<(), CliError> {
    std::fs::write(path, matrix_csv(&dm.points, &dm.matrix))
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

pub fn write_space_csv(path: &Path, space: &FiniteMetricSpace) -> Result<(), CliError> {
    std::fs::write(path, matrix_csv(&space.points, &space.matrix))
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::numeric(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}
