//! Deterministic text reports. Every number comes from a computed
//! quantity and is formatted with round-trip precision, so regenerating
//! a report from the same inputs is byte-identical.

use crate::analysis::{CorrelationReport, ExtremaComparison, ProfileFit};
use crate::fem::benchmark::BenchmarkReport;
use crate::io::{fmt_f64, SweepRow};
use crate::mesh::PlateMesh;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Expected worst-deflection band printed with sweep reports, derived
/// from the reference magnitudes the model is validated against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandCheck {
    pub label: &'static str,
    pub reference_mm: f64,
    pub lo_mm: f64,
    pub hi_mm: f64,
    pub worst_mm: f64,
    pub within: bool,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub title: String,
    pub config_digest: String,
    pub mesh_summary: String,
    pub constrained_nodes: usize,
    pub constrained_dofs: usize,
    pub solver_summary: String,
    pub positions: Vec<SweepRow>,
    pub worst_index: Option<usize>,
    pub band: Option<BandCheck>,
    /// Extra report blocks (profile, fit, correlation), pre-rendered.
    pub sections: Vec<String>,
}

impl RunReport {
    pub fn mesh_summary(mesh: &PlateMesh) -> String {
        format!(
            "grid {}x{} cells, dx = {} mm, dy = {} mm, {} nodes, {} elements, {} DOFs",
            mesh.nx,
            mesh.ny,
            fmt_f64(mesh.dx_mm),
            fmt_f64(mesh.dy_mm),
            mesh.node_count(),
            mesh.element_count(),
            mesh.dof_count()
        )
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} report\n", self.title));
        out.push_str(&format!("tool_version = {}\n", TOOL_VERSION));
        out.push_str(&format!("config_digest = {}\n", self.config_digest));
        out.push_str(&format!("mesh = {}\n", self.mesh_summary));
        out.push_str(&format!(
            "supports = {} clamp nodes ({} constrained DOFs)\n",
            self.constrained_nodes, self.constrained_dofs
        ));
        out.push_str(&format!("solver = {}\n", self.solver_summary));
        if !self.positions.is_empty() {
            out.push_str("\n## positions\n");
            out.push_str(
                "index | center_x_mm | center_y_mm | total_force_n | max_abs_w_mm | at (x_mm, y_mm)\n",
            );
            for row in &self.positions {
                out.push_str(&format!(
                    "{} | {} | {} | {} | {} | ({}, {})\n",
                    row.index,
                    fmt_f64(row.center_x_mm),
                    fmt_f64(row.center_y_mm),
                    fmt_f64(row.total_force_n),
                    fmt_f64(row.max_abs_w_mm),
                    fmt_f64(row.max_w_x_mm),
                    fmt_f64(row.max_w_y_mm),
                ));
            }
        }
        if let Some(worst) = self.worst_index {
            let row = &self.positions[worst];
            out.push_str(&format!(
                "\nworst_position: index {} at center_x = {} mm, max |w| = {} mm at ({}, {})\n",
                row.index,
                fmt_f64(row.center_x_mm),
                fmt_f64(row.max_abs_w_mm),
                fmt_f64(row.max_w_x_mm),
                fmt_f64(row.max_w_y_mm),
            ));
        }
        if let Some(band) = &self.band {
            out.push_str(&format!(
                "band_check[{}]: worst |w| = {} mm vs reference {} mm ± 25% [{}, {}] -> {}\n",
                band.label,
                fmt_f64(band.worst_mm),
                fmt_f64(band.reference_mm),
                fmt_f64(band.lo_mm),
                fmt_f64(band.hi_mm),
                if band.within { "within" } else { "OUTSIDE" },
            ));
        }
        for section in &self.sections {
            out.push('\n');
            out.push_str(section);
        }
        out
    }
}

pub fn render_fit(fit: &ProfileFit) -> String {
    let mut out = String::new();
    out.push_str("## quadratic fit y = a·x² + b·x + c\n");
    out.push_str(&format!("n = {}\n", fit.n));
    out.push_str(&format!(
        "window_mm = [{}, {}]\n",
        fmt_f64(fit.window_mm.0),
        fmt_f64(fit.window_mm.1)
    ));
    out.push_str(&format!("a_per_mm = {}\n", fmt_f64(fit.a_per_mm)));
    out.push_str(&format!("b = {}\n", fmt_f64(fit.b)));
    out.push_str(&format!("c_mm = {}\n", fmt_f64(fit.c_mm)));
    out.push_str(&format!("rss_mm2 = {}\n", fmt_f64(fit.rss_mm2)));
    out.push_str(&format!("r_squared = {}\n", fmt_f64(fit.r_squared)));
    match fit.vertex {
        Some((x, y)) => {
            out.push_str(&format!("vertex_x_mm = {}\n", fmt_f64(x)));
            out.push_str(&format!("vertex_y_mm = {}\n", fmt_f64(y)));
        }
        None => out.push_str("vertex = none (quadratic term is zero)\n"),
    }
    out
}

pub fn render_correlation(report: &CorrelationReport) -> String {
    let mut out = String::new();
    out.push_str("## correlation\n");
    out.push_str(&format!("n = {}\n", report.n));
    out.push_str(&format!("mean_a_mm = {}\n", fmt_f64(report.mean_a)));
    out.push_str(&format!("mean_b_mm = {}\n", fmt_f64(report.mean_b)));
    out.push_str(&format!("variance_a_mm2 = {}\n", fmt_f64(report.variance_a)));
    out.push_str(&format!("variance_b_mm2 = {}\n", fmt_f64(report.variance_b)));
    out.push_str(&format!("r = {}\n", fmt_f64(report.r)));
    out
}

pub fn render_extrema(cmp: &ExtremaComparison) -> String {
    let mut out = String::new();
    out.push_str("## extrema comparison\n");
    out.push_str(&format!(
        "first_minimum = ({} mm, {} mm)\n",
        fmt_f64(cmp.first_position_mm),
        fmt_f64(cmp.first_value_mm)
    ));
    out.push_str(&format!(
        "second_minimum = ({} mm, {} mm)\n",
        fmt_f64(cmp.second_position_mm),
        fmt_f64(cmp.second_value_mm)
    ));
    out.push_str(&format!(
        "delta_position_mm = {}\n",
        fmt_f64(cmp.delta_position_mm)
    ));
    out.push_str(&format!(
        "delta_position_pct_of_first = {}\n",
        fmt_f64(cmp.delta_position_pct)
    ));
    out.push_str(&format!("delta_value_mm = {}\n", fmt_f64(cmp.delta_value_mm)));
    out
}

pub fn render_benchmark_table(reports: &[BenchmarkReport]) -> String {
    let mut out = String::new();
    out.push_str("case | cells | computed_mm | analytical_mm | rel_error | tolerance | status\n");
    for r in reports {
        out.push_str(&format!(
            "{} | {} | {} | {} | {} | {} | {}\n",
            r.case.name(),
            r.cells_per_side,
            fmt_f64(r.computed_mm),
            fmt_f64(r.analytical_mm),
            fmt_f64(r.relative_error),
            fmt_f64(r.tolerance),
            if r.passed { "pass" } else { "FAIL" },
        ));
    }
    out
}
