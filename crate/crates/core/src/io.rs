//! File formats: profile CSV, sweep CSV, field exports (CSV grid and
//! legacy VTK), and experimental-data ingestion.
//!
//! Numbers are written with the shortest representation that round-trips
//! the underlying f64, so re-ingested values are bit-identical and
//! repeated runs produce byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::analysis::{Profile, ProfileSource};
use crate::error::{Error, Result};
use crate::fem::DeflectionField;
use crate::mesh::PlateMesh;
use crate::model::FieldFormat;

/// Shortest round-trip decimal form; negative zero is normalized.
pub fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub const PROFILE_HEADER: &str = "position_mm,deflection_mm";

/// Write a profile CSV: metadata comment lines, the fixed header, one
/// row per sample.
pub fn write_profile_csv(path: &Path, profile: &Profile) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# source: {}\n", profile.source));
    out.push_str(&format!("# line: {}\n", profile.line));
    out.push_str("# sign: negative deflection points toward the ground\n");
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for (x, y) in profile.positions_mm.iter().zip(&profile.deflections_mm) {
        out.push_str(&format!("{},{}\n", fmt_f64(*x), fmt_f64(*y)));
    }
    write_atomic(path, out.as_bytes())
}

/// Parse a profile CSV. Positions must be strictly increasing; errors
/// name the first offending line.
pub fn read_profile_csv(path: &Path, source: ProfileSource) -> Result<Profile> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut positions = Vec::new();
    let mut deflections = Vec::new();
    let mut saw_header = false;
    let mut line_desc = String::from("file");
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(spec) = comment.trim().strip_prefix("line:") {
                line_desc = spec.trim().to_string();
            }
            continue;
        }
        if !saw_header {
            if line != PROFILE_HEADER {
                return Err(Error::CsvParse {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: format!("expected header '{PROFILE_HEADER}', found '{line}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut cells = line.split(',');
        let (a, b) = match (cells.next(), cells.next(), cells.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::CsvParse {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: "expected exactly two comma-separated columns".into(),
                })
            }
        };
        let parse = |cell: &str, what: &str| -> Result<f64> {
            cell.trim().parse::<f64>().map_err(|_| Error::CsvParse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("{what} '{}' is not a number", cell.trim()),
            })
        };
        let x = parse(a, "position")?;
        let y = parse(b, "deflection")?;
        if let Some(&prev) = positions.last() {
            if x <= prev {
                return Err(Error::CsvParse {
                    path: path.to_path_buf(),
                    line: line_no,
                    message: format!(
                        "positions must be strictly increasing ({x} mm after {prev} mm)"
                    ),
                });
            }
        }
        positions.push(x);
        deflections.push(y);
    }
    if !saw_header {
        return Err(Error::CsvParse {
            path: path.to_path_buf(),
            line: 1,
            message: "empty file (missing header)".into(),
        });
    }
    if positions.is_empty() {
        return Err(Error::CsvParse {
            path: path.to_path_buf(),
            line: text.lines().count().max(1),
            message: "no data rows".into(),
        });
    }
    Profile::new(positions, deflections, line_desc, source)
}

/// Ingest a dial-gauge measurement series (tagged `experiment`).
pub fn read_experiment_csv(path: &Path) -> Result<Profile> {
    read_profile_csv(path, ProfileSource::Experiment)
}

/// One sweep row: robot position, applied force, worst deflection.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub index: usize,
    pub center_x_mm: f64,
    pub center_y_mm: f64,
    pub total_force_n: f64,
    pub max_abs_w_mm: f64,
    pub max_w_x_mm: f64,
    pub max_w_y_mm: f64,
}

pub const SWEEP_HEADER: &str =
    "index,center_x_mm,center_y_mm,total_force_n,max_abs_w_mm,max_w_x_mm,max_w_y_mm";

pub fn render_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.index,
            fmt_f64(r.center_x_mm),
            fmt_f64(r.center_y_mm),
            fmt_f64(r.total_force_n),
            fmt_f64(r.max_abs_w_mm),
            fmt_f64(r.max_w_x_mm),
            fmt_f64(r.max_w_y_mm),
        ));
    }
    out
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    write_atomic(path, render_sweep_csv(rows).as_bytes())
}

/// Export the solved field: one row per node (`csv_grid`) or an ASCII
/// legacy-VTK structured grid loadable by standard viewers.
pub fn export_field(
    field: &DeflectionField,
    mesh: &PlateMesh,
    path: &Path,
    format: FieldFormat,
) -> Result<()> {
    let body = match format {
        FieldFormat::CsvGrid => render_csv_grid(field, mesh),
        FieldFormat::VtkLegacy => render_vtk_legacy(field, mesh),
    };
    write_atomic(path, body.as_bytes())
}

fn render_csv_grid(field: &DeflectionField, mesh: &PlateMesh) -> String {
    let mut out = String::new();
    out.push_str("# deflection field; w positive toward the applied load (downward)\n");
    out.push_str(&format!("# config: {}\n", field.config_digest));
    out.push_str("x_mm,y_mm,w_mm\n");
    for node in 0..mesh.node_count() {
        let (x, y) = mesh.node_coords_mm(node);
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(field.w_mm[node])
        ));
    }
    out
}

fn render_vtk_legacy(field: &DeflectionField, mesh: &PlateMesh) -> String {
    let n = mesh.node_count();
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str("panel deflection field (w positive toward the load)\n");
    out.push_str("ASCII\n");
    out.push_str("DATASET STRUCTURED_GRID\n");
    out.push_str(&format!("DIMENSIONS {} {} 1\n", mesh.nx + 1, mesh.ny + 1));
    out.push_str(&format!("POINTS {n} double\n"));
    // VTK structured grids index x fastest
    for j in 0..=mesh.ny {
        for i in 0..=mesh.nx {
            let node = mesh.node_index(i, j);
            let (x, y) = mesh.node_coords_mm(node);
            out.push_str(&format!(
                "{} {} {}\n",
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(-field.w_mm[node])
            ));
        }
    }
    out.push_str(&format!("POINT_DATA {n}\n"));
    out.push_str("SCALARS deflection_mm double 1\n");
    out.push_str("LOOKUP_TABLE default\n");
    for j in 0..=mesh.ny {
        for i in 0..=mesh.nx {
            out.push_str(&format!("{}\n", fmt_f64(field.w_mm[mesh.node_index(i, j)])));
        }
    }
    out
}

/// Write via a temp file + rename so partially written outputs never
/// land under the final name.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err(path))?;
        }
    }
    let tmp: PathBuf = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(bytes).map_err(io_err(&tmp))?;
    }
    std::fs::rename(&tmp, path).map_err(io_err(path))?;
    Ok(())
}

/// Write any rendered report/document.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes())
}
