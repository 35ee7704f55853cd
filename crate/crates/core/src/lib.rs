//! Plate-bending finite element toolkit for photovoltaic panel
//! deflection under the belt loads of a cleaning robot.
//!
//! The model is a thin glass plate on perimeter beam stiffeners, clamped
//! at four pads, loaded by two rectangular belt footprints. The crate
//! covers configuration ingestion, structured meshing, assembly and SPD
//! solves, trajectory sweeps, profile extraction, quadratic fitting,
//! correlation against measured profiles, and file exports.

pub mod analysis;
pub mod driver;
pub mod error;
pub mod fem;
pub mod io;
pub mod loading;
pub mod mesh;
pub mod model;
pub mod report;

pub use analysis::{
    compare_extrema, extract_profile, fit_quadratic, min_deflection, pearson, CorrelationReport,
    ExtremaComparison, Profile, ProfileFit, ProfileSource,
};
pub use driver::{PositionResult, Simulation, SweepOutcome};
pub use error::{Error, ErrorClass, Result};
pub use fem::benchmark::{verify_benchmark, verify_benchmark_with, BenchmarkCase, BenchmarkReport};
pub use fem::{
    apply_constraints, assemble, solve, solve_with, DeflectionField, GlobalSystem, Solution,
};
pub use io::{export_field, read_experiment_csv, read_profile_csv, write_profile_csv};
pub use loading::{belt_footprints, nodal_forces, sweep_positions, Footprint};
pub use mesh::{build_grid, clamp_node_set, extraction_line, DofMap, LineSpec, PlateMesh};
pub use model::{
    flexural_rigidity, load_config, normal_force, ClampMode, ClampPad, FieldFormat, FrameSection,
    MaterialProps, PanelEdge, PanelModel, RobotLoad, Scenario, ScenarioKind, SimulationConfig,
    SolveMethod, SolverSettings,
};
pub use report::{RunReport, TOOL_VERSION};
