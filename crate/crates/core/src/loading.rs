//! Belt footprint geometry, consistent nodal loads, and trajectory
//! sweeps.
//!
//! The robot's weight is spread evenly over the two belt patches; when a
//! patch is partially off the panel, the nominal pressure is kept and the
//! applied force shrinks with the clipped contact area.

use crate::error::{Error, Result};
use crate::fem::plate::PlateElement;
use crate::mesh::{EdgeDirection, PlateMesh};
use crate::model::{PanelModel, RobotLoad, Scenario, ScenarioKind, MM_PER_M};

/// One belt contact rectangle in panel coordinates, already clipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footprint {
    pub x_min_mm: f64,
    pub x_max_mm: f64,
    pub y_min_mm: f64,
    pub y_max_mm: f64,
    pub pressure_pa: f64,
}

impl Footprint {
    fn clipped(
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        panel: &PanelModel,
        pressure_pa: f64,
    ) -> Self {
        Self {
            x_min_mm: x0.max(0.0),
            x_max_mm: x1.min(panel.length_mm),
            y_min_mm: y0.max(0.0),
            y_max_mm: y1.min(panel.width_mm),
            pressure_pa,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.x_max_mm <= self.x_min_mm || self.y_max_mm <= self.y_min_mm
    }

    pub fn area_m2(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            (self.x_max_mm - self.x_min_mm) * (self.y_max_mm - self.y_min_mm) / (MM_PER_M * MM_PER_M)
        }
    }

    pub fn force_n(&self) -> f64 {
        self.pressure_pa * self.area_m2()
    }
}

/// Belt rectangles for a robot centered at (center_x, center_y), clipped
/// to the panel, plus the total applied force (proportional to on-panel
/// contact area). An off-panel robot yields empty footprints and zero
/// force.
pub fn belt_footprints(
    robot: &RobotLoad,
    panel: &PanelModel,
    center_x_mm: f64,
    center_y_mm: f64,
) -> ([Footprint; 2], f64) {
    let pressure = robot.normal_force_n() / robot.total_belt_area_m2();
    let half_len = robot.belt_contact_length_mm / 2.0;
    let half_width = robot.belt_width_mm / 2.0;
    let offsets = [-robot.belt_spacing_mm / 2.0, robot.belt_spacing_mm / 2.0];
    let footprints = offsets.map(|dy| {
        let yc = center_y_mm + dy;
        Footprint::clipped(
            center_x_mm - half_len,
            center_x_mm + half_len,
            yc - half_width,
            yc + half_width,
            panel,
            pressure,
        )
    });
    let total = footprints[0].force_n() + footprints[1].force_n();
    (footprints, total)
}

/// Consistent nodal loads (length 3·nodes, SI) of a uniform pressure over
/// an arbitrary rectangle, integrated exactly against the plate shape
/// functions element by element.
pub fn distributed_pressure(
    mesh: &PlateMesh,
    x_min_mm: f64,
    x_max_mm: f64,
    y_min_mm: f64,
    y_max_mm: f64,
    pressure_pa: f64,
) -> Vec<f64> {
    let mut load = vec![0.0; mesh.dof_count()];
    accumulate_pressure(
        mesh,
        x_min_mm,
        x_max_mm,
        y_min_mm,
        y_max_mm,
        pressure_pa,
        &mut load,
    );
    load
}

fn accumulate_pressure(
    mesh: &PlateMesh,
    x_min_mm: f64,
    x_max_mm: f64,
    y_min_mm: f64,
    y_max_mm: f64,
    pressure_pa: f64,
    load: &mut [f64],
) {
    if x_max_mm <= x_min_mm || y_max_mm <= y_min_mm {
        return;
    }
    // shape-function weights depend on cell geometry only
    let element = PlateElement::new(mesh.dx_mm / MM_PER_M, mesh.dy_mm / MM_PER_M, 1.0, 0.0);
    let ci_lo = ((x_min_mm / mesh.dx_mm).floor().max(0.0) as usize).min(mesh.nx - 1);
    let ci_hi = ((x_max_mm / mesh.dx_mm).ceil() as usize).min(mesh.nx);
    let cj_lo = ((y_min_mm / mesh.dy_mm).floor().max(0.0) as usize).min(mesh.ny - 1);
    let cj_hi = ((y_max_mm / mesh.dy_mm).ceil() as usize).min(mesh.ny);
    for ci in ci_lo..ci_hi {
        for cj in cj_lo..cj_hi {
            let (ox, oy) = mesh.element_origin_mm(ci, cj);
            let lx0 = (x_min_mm - ox).max(0.0) / MM_PER_M;
            let lx1 = (x_max_mm - ox).min(mesh.dx_mm) / MM_PER_M;
            let ly0 = (y_min_mm - oy).max(0.0) / MM_PER_M;
            let ly1 = (y_max_mm - oy).min(mesh.dy_mm) / MM_PER_M;
            if lx1 <= lx0 || ly1 <= ly0 {
                continue;
            }
            let f = element.consistent_pressure_load(pressure_pa, lx0, lx1, ly0, ly1);
            let nodes = mesh.element_nodes(ci, cj);
            for (k, &node) in nodes.iter().enumerate() {
                load[3 * node] += f[3 * k];
                load[3 * node + 1] += f[3 * k + 1];
                load[3 * node + 2] += f[3 * k + 2];
            }
        }
    }
}

/// Consistent nodal loads for a pair of clipped belt footprints.
pub fn nodal_forces(mesh: &PlateMesh, footprints: &[Footprint; 2]) -> Vec<f64> {
    let mut load = vec![0.0; mesh.dof_count()];
    for fp in footprints {
        if !fp.is_empty() {
            accumulate_pressure(
                mesh,
                fp.x_min_mm,
                fp.x_max_mm,
                fp.y_min_mm,
                fp.y_max_mm,
                fp.pressure_pa,
                &mut load,
            );
        }
    }
    load
}

/// Dead load of the glass sheet plus the perimeter frame, for the
/// gravity-on sensitivity mode.
pub fn self_weight_forces(mesh: &PlateMesh, panel: &PanelModel, gravity_m_s2: f64) -> Vec<f64> {
    let glass_pressure =
        panel.glass.mass_density_kg_m3 * gravity_m_s2 * panel.glass_thickness_m();
    let mut load = distributed_pressure(
        mesh,
        0.0,
        mesh.length_mm,
        0.0,
        mesh.width_mm,
        glass_pressure,
    );
    let line_load =
        panel.frame_material.mass_density_kg_m3 * gravity_m_s2 * panel.frame_section.area_m2();
    for edge in mesh.perimeter_edges() {
        let length_m = match edge.direction {
            EdgeDirection::AlongX => mesh.dx_mm,
            EdgeDirection::AlongY => mesh.dy_mm,
        } / MM_PER_M;
        let f = crate::fem::beam::beam_line_load(length_m, line_load);
        // local (w, φ, ψ) → global (w, θx, θy): slope forces land on θy
        // with a sign flip for x-edges, on θx directly for y-edges.
        for (node_k, &node) in [edge.n1, edge.n2].iter().enumerate() {
            load[3 * node] += f[3 * node_k];
            match edge.direction {
                EdgeDirection::AlongX => load[3 * node + 2] -= f[3 * node_k + 1],
                EdgeDirection::AlongY => load[3 * node + 1] += f[3 * node_k + 1],
            }
        }
    }
    load
}

/// Robot center positions for a scenario, in trajectory order.
pub fn sweep_positions(
    scenario: &Scenario,
    panel: &PanelModel,
    robot: &RobotLoad,
) -> Result<Vec<(f64, f64)>> {
    let positions: Vec<(f64, f64)> = match scenario.kind {
        ScenarioKind::CentralLinear => {
            let y = panel.width_mm / 2.0;
            (0..scenario.count)
                .map(|i| (scenario.start_mm + i as f64 * scenario.step_mm, y))
                .collect()
        }
        ScenarioKind::SideLinear => {
            let y = scenario.lateral_offset_mm
                + robot.belt_width_mm / 2.0
                + robot.belt_spacing_mm / 2.0;
            (0..scenario.count)
                .map(|i| (scenario.start_mm + i as f64 * scenario.step_mm, y))
                .collect()
        }
        ScenarioKind::SinglePosition => vec![(scenario.center_x_mm, scenario.center_y_mm)],
    };
    let any_on_panel = positions.iter().any(|&(x, y)| {
        let (fps, _) = belt_footprints(robot, panel, x, y);
        fps.iter().any(|fp| !fp.is_empty())
    });
    if !any_on_panel {
        return Err(Error::DegenerateSweep);
    }
    Ok(positions)
}
