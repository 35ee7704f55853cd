//! Structured rectangular grid over the panel mid-plane, bending DOF
//! numbering, and node-set queries for clamps and extraction lines.

use crate::error::{Error, Result};
use crate::model::{ClampPad, PanelEdge, PanelModel};

/// Structured grid of congruent rectangular cells covering the exact
/// panel rectangle. Cell counts follow the ceil rule, so `dx <= target`
/// and `nx * dx == length`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateMesh {
    pub nx: usize,
    pub ny: usize,
    pub dx_mm: f64,
    pub dy_mm: f64,
    pub length_mm: f64,
    pub width_mm: f64,
}

/// One perimeter edge segment between two adjacent boundary nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerimeterEdge {
    pub n1: usize,
    pub n2: usize,
    pub direction: EdgeDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeDirection {
    AlongX,
    AlongY,
}

impl PlateMesh {
    /// Build a grid for an arbitrary rectangle (benchmarks use squares,
    /// which `PanelModel` itself does not allow).
    pub fn build(length_mm: f64, width_mm: f64, target_size_mm: f64) -> Result<Self> {
        if !(target_size_mm > 0.0) {
            return Err(Error::Invariant(format!(
                "mesh target size must be > 0, got {target_size_mm}"
            )));
        }
        if target_size_mm >= length_mm.min(width_mm) / 4.0 {
            return Err(Error::ExcessiveMeshSize {
                target_mm: target_size_mm,
                length_mm,
                width_mm,
            });
        }
        let nx = (length_mm / target_size_mm).ceil() as usize;
        let ny = (width_mm / target_size_mm).ceil() as usize;
        Ok(Self {
            nx,
            ny,
            dx_mm: length_mm / nx as f64,
            dy_mm: width_mm / ny as f64,
            length_mm,
            width_mm,
        })
    }

    pub fn node_count(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn element_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn dof_count(&self) -> usize {
        3 * self.node_count()
    }

    /// Node numbering runs y-fastest so that the global matrix bandwidth
    /// is set by the short grid direction.
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.nx && j <= self.ny);
        i * (self.ny + 1) + j
    }

    pub fn node_grid_coords(&self, node: usize) -> (usize, usize) {
        (node / (self.ny + 1), node % (self.ny + 1))
    }

    pub fn node_coords_mm(&self, node: usize) -> (f64, f64) {
        let (i, j) = self.node_grid_coords(node);
        (i as f64 * self.dx_mm, j as f64 * self.dy_mm)
    }

    /// Corner nodes of cell (ci, cj), counterclockwise from the
    /// lower-left corner.
    pub fn element_nodes(&self, ci: usize, cj: usize) -> [usize; 4] {
        debug_assert!(ci < self.nx && cj < self.ny);
        [
            self.node_index(ci, cj),
            self.node_index(ci + 1, cj),
            self.node_index(ci + 1, cj + 1),
            self.node_index(ci, cj + 1),
        ]
    }

    /// Lower-left corner of cell (ci, cj) in panel coordinates.
    pub fn element_origin_mm(&self, ci: usize, cj: usize) -> (f64, f64) {
        (ci as f64 * self.dx_mm, cj as f64 * self.dy_mm)
    }

    /// Boundary node pairs; every segment carries exactly one frame beam
    /// element. Order: y = 0 edge, y = width edge, x = 0 edge, x = length
    /// edge.
    pub fn perimeter_edges(&self) -> Vec<PerimeterEdge> {
        let mut edges = Vec::with_capacity(2 * (self.nx + self.ny));
        for j in [0, self.ny] {
            for i in 0..self.nx {
                edges.push(PerimeterEdge {
                    n1: self.node_index(i, j),
                    n2: self.node_index(i + 1, j),
                    direction: EdgeDirection::AlongX,
                });
            }
        }
        for i in [0, self.nx] {
            for j in 0..self.ny {
                edges.push(PerimeterEdge {
                    n1: self.node_index(i, j),
                    n2: self.node_index(i, j + 1),
                    direction: EdgeDirection::AlongY,
                });
            }
        }
        edges
    }

    /// All nodes on the boundary, ascending.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        let mut set = std::collections::BTreeSet::new();
        for i in 0..=self.nx {
            set.insert(self.node_index(i, 0));
            set.insert(self.node_index(i, self.ny));
        }
        for j in 0..=self.ny {
            set.insert(self.node_index(0, j));
            set.insert(self.node_index(self.nx, j));
        }
        set.into_iter().collect()
    }
}

/// Build the analysis grid for a panel. Cell size is at most
/// `target_size_mm` in both directions and the grid covers the exact
/// panel rectangle.
pub fn build_grid(panel: &PanelModel, target_size_mm: f64) -> Result<PlateMesh> {
    PlateMesh::build(panel.length_mm, panel.width_mm, target_size_mm)
}

const COORD_EPS_MM: f64 = 1.0e-9;

/// Nodes whose edge coordinate falls inside a clamp pad footprint.
/// Errors if any pad captures no node (mesh too coarse for the pad).
pub fn clamp_node_set(mesh: &PlateMesh, pads: &[ClampPad]) -> Result<Vec<usize>> {
    let mut set = std::collections::BTreeSet::new();
    for pad in pads {
        let j = match pad.edge {
            PanelEdge::LongNear => 0,
            PanelEdge::LongFar => mesh.ny,
        };
        let lo = (pad.center_offset_from_short_edge_mm - pad.pad_width_mm / 2.0).max(0.0);
        let hi = (pad.center_offset_from_short_edge_mm + pad.pad_width_mm / 2.0)
            .min(mesh.length_mm);
        let i_lo = ((lo - COORD_EPS_MM) / mesh.dx_mm).ceil().max(0.0) as usize;
        let i_hi = (((hi + COORD_EPS_MM) / mesh.dx_mm).floor() as isize).min(mesh.nx as isize);
        if (i_lo as isize) > i_hi {
            return Err(Error::EmptyPad {
                center_mm: pad.center_offset_from_short_edge_mm,
                width_mm: pad.pad_width_mm,
            });
        }
        for i in i_lo..=(i_hi as usize) {
            set.insert(mesh.node_index(i, j));
        }
    }
    Ok(set.into_iter().collect())
}

/// Axis-parallel cross-section line. `FixedY` runs along x at the given
/// y, `FixedX` runs along y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineSpec {
    FixedY { y_mm: f64 },
    FixedX { x_mm: f64 },
}

impl std::fmt::Display for LineSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LineSpec::FixedY { y_mm } => write!(f, "y={y_mm}"),
            LineSpec::FixedX { x_mm } => write!(f, "x={x_mm}"),
        }
    }
}

/// A cross-section line snapped to the nearest grid line.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionLine {
    /// Nodes along the snapped grid line, ordered by running coordinate.
    pub nodes: Vec<usize>,
    /// Running coordinate of each node, mm.
    pub positions_mm: Vec<f64>,
    /// The requested line.
    pub requested: LineSpec,
    /// Fixed coordinate after snapping, mm.
    pub snapped_mm: f64,
    /// |requested − snapped|, always <= half a cell.
    pub snap_distance_mm: f64,
}

/// Locate the grid line nearest to the requested cross-section and list
/// its nodes in running-coordinate order.
pub fn extraction_line(mesh: &PlateMesh, line: LineSpec) -> Result<ExtractionLine> {
    match line {
        LineSpec::FixedY { y_mm } => {
            if !(-COORD_EPS_MM..=mesh.width_mm + COORD_EPS_MM).contains(&y_mm) {
                return Err(Error::OutOfPanel(format!("y = {y_mm} mm")));
            }
            let j = ((y_mm / mesh.dy_mm).round() as usize).min(mesh.ny);
            let snapped = j as f64 * mesh.dy_mm;
            let nodes: Vec<usize> = (0..=mesh.nx).map(|i| mesh.node_index(i, j)).collect();
            let positions = (0..=mesh.nx).map(|i| i as f64 * mesh.dx_mm).collect();
            Ok(ExtractionLine {
                nodes,
                positions_mm: positions,
                requested: line,
                snapped_mm: snapped,
                snap_distance_mm: (y_mm - snapped).abs(),
            })
        }
        LineSpec::FixedX { x_mm } => {
            if !(-COORD_EPS_MM..=mesh.length_mm + COORD_EPS_MM).contains(&x_mm) {
                return Err(Error::OutOfPanel(format!("x = {x_mm} mm")));
            }
            let i = ((x_mm / mesh.dx_mm).round() as usize).min(mesh.nx);
            let snapped = i as f64 * mesh.dx_mm;
            let nodes: Vec<usize> = (0..=mesh.ny).map(|j| mesh.node_index(i, j)).collect();
            let positions = (0..=mesh.ny).map(|j| j as f64 * mesh.dy_mm).collect();
            Ok(ExtractionLine {
                nodes,
                positions_mm: positions,
                requested: line,
                snapped_mm: snapped,
                snap_distance_mm: (x_mm - snapped).abs(),
            })
        }
    }
}

/// Per-node bending DOFs: transverse displacement w plus rotations about
/// x and y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    W,
    ThetaX,
    ThetaY,
}

/// Global DOF index of (node, kind): w, theta_x, theta_y interleaved.
pub fn dof_index(node: usize, kind: DofKind) -> usize {
    3 * node
        + match kind {
            DofKind::W => 0,
            DofKind::ThetaX => 1,
            DofKind::ThetaY => 2,
        }
}

/// Partition of the full DOF range into free and constrained sets, with
/// a dense renumbering of the free DOFs that preserves ascending order.
#[derive(Debug, Clone)]
pub struct DofMap {
    free_of_dof: Vec<Option<usize>>,
    dof_of_free: Vec<usize>,
    constrained: Vec<usize>,
}

impl DofMap {
    /// `constrained_dofs` may arrive unsorted and with duplicates.
    pub fn new(total_dofs: usize, constrained_dofs: &[usize]) -> Self {
        let mut is_constrained = vec![false; total_dofs];
        for &d in constrained_dofs {
            is_constrained[d] = true;
        }
        let mut free_of_dof = vec![None; total_dofs];
        let mut dof_of_free = Vec::with_capacity(total_dofs);
        let mut constrained = Vec::new();
        for (dof, &fixed) in is_constrained.iter().enumerate() {
            if fixed {
                constrained.push(dof);
            } else {
                free_of_dof[dof] = Some(dof_of_free.len());
                dof_of_free.push(dof);
            }
        }
        Self {
            free_of_dof,
            dof_of_free,
            constrained,
        }
    }

    pub fn total_dofs(&self) -> usize {
        self.free_of_dof.len()
    }

    pub fn free_count(&self) -> usize {
        self.dof_of_free.len()
    }

    pub fn constrained_dofs(&self) -> &[usize] {
        &self.constrained
    }

    pub fn free_index(&self, dof: usize) -> Option<usize> {
        self.free_of_dof[dof]
    }

    pub fn dof_of_free_index(&self, free: usize) -> usize {
        self.dof_of_free[free]
    }

    /// (node, kind) of a full DOF index.
    pub fn describe(dof: usize) -> (usize, DofKind) {
        let kind = match dof % 3 {
            0 => DofKind::W,
            1 => DofKind::ThetaX,
            _ => DofKind::ThetaY,
        };
        (dof / 3, kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_config;

    fn default_mesh() -> PlateMesh {
        let cfg = load_config("").unwrap();
        build_grid(&cfg.panel, 10.0).unwrap()
    }

    #[test]
    fn default_panel_grid_dimensions() {
        let mesh = default_mesh();
        assert_eq!((mesh.nx, mesh.ny), (196, 100));
        assert!((mesh.dx_mm - 1956.0 / 196.0).abs() < 1.0e-12);
        assert!((mesh.dy_mm - 9.92).abs() < 1.0e-12);
        assert_eq!(mesh.node_count(), 197 * 101);
        assert_eq!(mesh.element_count(), 196 * 100);
        assert_eq!(mesh.dof_count(), 3 * 197 * 101);
    }

    #[test]
    fn finer_grid_follows_ceil_rule() {
        let cfg = load_config("").unwrap();
        let mesh = build_grid(&cfg.panel, 5.0).unwrap();
        assert_eq!((mesh.nx, mesh.ny), (392, 199));
    }

    #[test]
    fn excessive_target_size_is_rejected() {
        let err = PlateMesh::build(1000.0, 1000.0, 500.0).unwrap_err();
        assert!(matches!(err, Error::ExcessiveMeshSize { .. }));
    }

    #[test]
    fn cell_areas_sum_to_panel_area() {
        let mesh = default_mesh();
        let total = mesh.element_count() as f64 * mesh.dx_mm * mesh.dy_mm;
        let panel = mesh.length_mm * mesh.width_mm;
        assert!(((total - panel) / panel).abs() < 1.0e-12);
    }

    #[test]
    fn element_nodes_are_counterclockwise() {
        let mesh = default_mesh();
        let [a, b, c, d] = mesh.element_nodes(3, 7);
        let pa = mesh.node_coords_mm(a);
        let pb = mesh.node_coords_mm(b);
        let pc = mesh.node_coords_mm(c);
        let pd = mesh.node_coords_mm(d);
        // shoelace signed area must be positive
        let area = 0.5
            * ((pa.0 * pb.1 - pb.0 * pa.1)
                + (pb.0 * pc.1 - pc.0 * pb.1)
                + (pc.0 * pd.1 - pd.0 * pc.1)
                + (pd.0 * pa.1 - pa.0 * pd.1));
        assert!(area > 0.0);
        assert!((area - mesh.dx_mm * mesh.dy_mm).abs() < 1.0e-9);
    }

    #[test]
    fn perimeter_edge_count() {
        let mesh = default_mesh();
        assert_eq!(mesh.perimeter_edges().len(), 2 * (mesh.nx + mesh.ny));
    }

    #[test]
    fn clamp_pad_captures_interior_nodes() {
        let mesh = default_mesh();
        let pad = ClampPad {
            edge: PanelEdge::LongNear,
            center_offset_from_short_edge_mm: 200.0,
            pad_width_mm: 40.0,
        };
        let nodes = clamp_node_set(&mesh, &[pad]).unwrap();
        // dx = 9.9796: grid multiples inside [180, 220] are i = 19..=22.
        assert_eq!(nodes.len(), 4);
        for &n in &nodes {
            let (x, y) = mesh.node_coords_mm(n);
            assert_eq!(y, 0.0);
            assert!((180.0..=220.0).contains(&x), "x = {x}");
        }
    }

    #[test]
    fn degenerate_pad_between_nodes_errors() {
        let mesh = default_mesh();
        // Pad narrower than half a cell, centered between two grid lines.
        let pad = ClampPad {
            edge: PanelEdge::LongNear,
            center_offset_from_short_edge_mm: 4.5 * mesh.dx_mm,
            pad_width_mm: mesh.dx_mm / 3.0,
        };
        let err = clamp_node_set(&mesh, &[pad]).unwrap_err();
        assert!(matches!(err, Error::EmptyPad { .. }));
    }

    #[test]
    fn two_pads_on_one_edge_union_disjoint_sets() {
        let mesh = default_mesh();
        let mk = |c: f64| ClampPad {
            edge: PanelEdge::LongFar,
            center_offset_from_short_edge_mm: c,
            pad_width_mm: 40.0,
        };
        let a = clamp_node_set(&mesh, &[mk(200.0)]).unwrap();
        let b = clamp_node_set(&mesh, &[mk(1756.0)]).unwrap();
        let ab = clamp_node_set(&mesh, &[mk(200.0), mk(1756.0)]).unwrap();
        assert!(a.iter().all(|n| !b.contains(n)));
        assert_eq!(ab.len(), a.len() + b.len());
    }

    #[test]
    fn pad_capture_converges_to_pad_interval_under_refinement() {
        let cfg = load_config("").unwrap();
        let pad = ClampPad {
            edge: PanelEdge::LongNear,
            center_offset_from_short_edge_mm: 200.0,
            pad_width_mm: 40.0,
        };
        for target in [10.0, 5.0, 2.5, 1.25] {
            let mesh = build_grid(&cfg.panel, target).unwrap();
            let nodes = clamp_node_set(&mesh, std::slice::from_ref(&pad)).unwrap();
            let xs: Vec<f64> = nodes.iter().map(|&n| mesh.node_coords_mm(n).0).collect();
            let first = xs.first().copied().unwrap();
            let last = xs.last().copied().unwrap();
            assert!(first >= 180.0 - 1.0e-9 && first < 180.0 + mesh.dx_mm);
            assert!(last <= 220.0 + 1.0e-9 && last > 220.0 - mesh.dx_mm);
        }
    }

    #[test]
    fn extraction_line_mid_width() {
        let mesh = default_mesh();
        let line = extraction_line(&mesh, LineSpec::FixedY { y_mm: 496.0 }).unwrap();
        assert_eq!(line.nodes.len(), 197);
        assert_eq!(line.positions_mm[0], 0.0);
        assert!((line.positions_mm[196] - 1956.0).abs() < 1.0e-9);
        assert_eq!(line.snap_distance_mm, 0.0);
    }

    #[test]
    fn extraction_line_snaps_to_nearest_grid_line() {
        let mesh = default_mesh();
        let line = extraction_line(&mesh, LineSpec::FixedY { y_mm: 496.3 }).unwrap();
        assert!((line.snapped_mm - 496.0).abs() < 1.0e-9);
        assert!((line.snap_distance_mm - 0.3).abs() < 1.0e-9);
        assert!(line.snap_distance_mm <= mesh.dy_mm / 2.0);
    }

    #[test]
    fn extraction_line_outside_panel_errors() {
        let mesh = default_mesh();
        let err = extraction_line(&mesh, LineSpec::FixedY { y_mm: -5.0 }).unwrap_err();
        assert!(matches!(err, Error::OutOfPanel(_)));
    }

    #[test]
    fn dof_map_is_a_bijection() {
        let mesh = PlateMesh::build(100.0, 80.0, 10.0).unwrap();
        let constrained: Vec<usize> = vec![0, 1, 2, 30, 31, 32, 31]; // dup on purpose
        let map = DofMap::new(mesh.dof_count(), &constrained);
        assert_eq!(map.free_count() + map.constrained_dofs().len(), map.total_dofs());
        for free in 0..map.free_count() {
            let dof = map.dof_of_free_index(free);
            assert_eq!(map.free_index(dof), Some(free));
        }
        for &dof in map.constrained_dofs() {
            assert_eq!(map.free_index(dof), None);
        }
    }
}
