//! Physical parameters, configuration ingestion, and derived quantities.
//!
//! Geometry lives in millimeters, mechanics in SI (newtons, pascals,
//! meters); deflections are reported in millimeters. Conversion happens
//! at the assembly boundary, never implicitly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY_M_S2: f64 = 9.80665;

/// Newtons per kilogram-force.
pub const N_PER_KGF: f64 = STANDARD_GRAVITY_M_S2;

/// Millimeters per meter.
pub const MM_PER_M: f64 = 1000.0;

/// Isotropic elastic constants and density of one material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialProps {
    pub youngs_modulus_pa: f64,
    pub poisson_ratio: f64,
    pub mass_density_kg_m3: f64,
}

impl MaterialProps {
    /// Tempered glass: E = 73 GPa, nu = 0.23, rho = 2500 kg/m^3.
    pub fn tempered_glass() -> Self {
        Self {
            youngs_modulus_pa: 73.0e9,
            poisson_ratio: 0.23,
            mass_density_kg_m3: 2500.0,
        }
    }

    /// 6063-T5 aluminium: E = 70 GPa, nu = 0.3, rho = 2700 kg/m^3.
    pub fn aluminum_6063_t5() -> Self {
        Self {
            youngs_modulus_pa: 70.0e9,
            poisson_ratio: 0.3,
            mass_density_kg_m3: 2700.0,
        }
    }

    /// Shear modulus G = E / (2 (1 + nu)).
    pub fn shear_modulus_pa(&self) -> f64 {
        self.youngs_modulus_pa / (2.0 * (1.0 + self.poisson_ratio))
    }

    fn validate(&self, who: &str) -> Result<()> {
        if !(self.youngs_modulus_pa > 0.0) {
            return Err(Error::Invariant(format!(
                "{who}.youngs_modulus_pa must be > 0, got {}",
                self.youngs_modulus_pa
            )));
        }
        if !(self.mass_density_kg_m3 > 0.0) {
            return Err(Error::Invariant(format!(
                "{who}.mass_density_kg_m3 must be > 0, got {}",
                self.mass_density_kg_m3
            )));
        }
        if !(0.0..0.5).contains(&self.poisson_ratio) {
            return Err(Error::Invariant(format!(
                "{who}.poisson_ratio must satisfy 0 <= nu < 0.5, got {}",
                self.poisson_ratio
            )));
        }
        Ok(())
    }
}

/// Equivalent beam section constants for the aluminium frame profile.
///
/// The manufacturer does not publish section constants for the profile, so
/// the defaults are an estimate for a thin-walled hollow section of 40 mm
/// depth and roughly 1.5 mm wall. All three values are overridable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    pub area_mm2: f64,
    pub bending_inertia_mm4: f64,
    pub torsion_constant_mm4: f64,
}

impl Default for FrameSection {
    fn default() -> Self {
        Self {
            area_mm2: 180.0,
            bending_inertia_mm4: 3.5e4,
            torsion_constant_mm4: 1.0e4,
        }
    }
}

impl FrameSection {
    pub fn bending_inertia_m4(&self) -> f64 {
        self.bending_inertia_mm4 * 1.0e-12
    }

    pub fn torsion_constant_m4(&self) -> f64 {
        self.torsion_constant_mm4 * 1.0e-12
    }

    pub fn area_m2(&self) -> f64 {
        self.area_mm2 * 1.0e-6
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("area_mm2", self.area_mm2),
            ("bending_inertia_mm4", self.bending_inertia_mm4),
            ("torsion_constant_mm4", self.torsion_constant_mm4),
        ] {
            if !(v > 0.0) {
                return Err(Error::Invariant(format!(
                    "panel.frame_section.{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Which long edge a clamp pad sits on. `LongNear` is the y = 0 edge,
/// `LongFar` the y = width edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelEdge {
    LongNear,
    LongFar,
}

/// Fixed-support footprint where the panel mounts to the support frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClampPad {
    pub edge: PanelEdge,
    /// Pad center, measured along the long edge from the x = 0 short edge.
    pub center_offset_from_short_edge_mm: f64,
    /// Pad extent along the edge.
    pub pad_width_mm: f64,
}

/// Panel geometry, materials, supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelModel {
    /// Long side, mm.
    pub length_mm: f64,
    /// Short side, mm.
    pub width_mm: f64,
    pub glass_thickness_mm: f64,
    /// Overall frame depth, mm (informational; stiffness comes from
    /// `frame_section`).
    pub frame_depth_mm: f64,
    pub include_self_weight: bool,
    pub glass: MaterialProps,
    pub frame_material: MaterialProps,
    pub frame_section: FrameSection,
    pub clamp_pads: Vec<ClampPad>,
}

impl PanelModel {
    /// Clamp pads for a given panel length: two per long edge, centered
    /// 200 mm from each short edge, 40 mm wide.
    pub fn default_clamp_pads(length_mm: f64) -> Vec<ClampPad> {
        let mut pads = Vec::with_capacity(4);
        for edge in [PanelEdge::LongNear, PanelEdge::LongFar] {
            for offset in [200.0, length_mm - 200.0] {
                pads.push(ClampPad {
                    edge,
                    center_offset_from_short_edge_mm: offset,
                    pad_width_mm: 40.0,
                });
            }
        }
        pads
    }

    pub fn glass_thickness_m(&self) -> f64 {
        self.glass_thickness_mm / MM_PER_M
    }

    /// Flexural rigidity of the glass plate, N·m.
    pub fn glass_rigidity(&self) -> f64 {
        flexural_rigidity(
            self.glass.youngs_modulus_pa,
            self.glass_thickness_m(),
            self.glass.poisson_ratio,
        )
    }

    fn validate(&self) -> Result<()> {
        if !(self.width_mm > 0.0 && self.length_mm > self.width_mm) {
            return Err(Error::Invariant(format!(
                "panel: require length > width > 0, got {} x {}",
                self.length_mm, self.width_mm
            )));
        }
        if !(self.glass_thickness_mm > 0.0) {
            return Err(Error::Invariant(format!(
                "panel.glass_thickness_mm must be > 0, got {}",
                self.glass_thickness_mm
            )));
        }
        self.glass.validate("panel.glass")?;
        self.frame_material.validate("panel.frame_material")?;
        self.frame_section.validate()?;
        if self.clamp_pads.is_empty() {
            return Err(Error::Invariant(
                "panel.clamp_pads must contain at least one pad".into(),
            ));
        }
        for (i, pad) in self.clamp_pads.iter().enumerate() {
            let c = pad.center_offset_from_short_edge_mm;
            if !(c > 0.0 && c < self.length_mm) {
                return Err(Error::Invariant(format!(
                    "panel.clamp_pads[{i}].center_offset_from_short_edge_mm must lie strictly inside (0, {}), got {c}",
                    self.length_mm
                )));
            }
            if !(pad.pad_width_mm > 0.0) {
                return Err(Error::Invariant(format!(
                    "panel.clamp_pads[{i}].pad_width_mm must be > 0, got {}",
                    pad.pad_width_mm
                )));
            }
        }
        Ok(())
    }
}

/// Robot mass, footprint geometry and operating incline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotLoad {
    pub mass_kg: f64,
    pub incline_deg: f64,
    /// Belt contact patch length along the travel (x) direction.
    pub belt_contact_length_mm: f64,
    /// Centerline-to-centerline distance between the two belts.
    pub belt_spacing_mm: f64,
    pub belt_width_mm: f64,
    pub gravity_m_s2: f64,
    /// Pins the surface-normal force to an exact value (kgf), bypassing
    /// the mass/incline derivation.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub force_override_kgf: Option<f64>,
}

impl RobotLoad {
    /// Force normal to the panel surface, newtons.
    pub fn normal_force_n(&self) -> f64 {
        match self.force_override_kgf {
            Some(kgf) => kgf * N_PER_KGF,
            None => normal_force(self.mass_kg, self.incline_deg, self.gravity_m_s2),
        }
    }

    /// Nominal contact area of both belts, m².
    pub fn total_belt_area_m2(&self) -> f64 {
        2.0 * (self.belt_contact_length_mm / MM_PER_M) * (self.belt_width_mm / MM_PER_M)
    }

    fn validate(&self, panel_width_mm: f64) -> Result<()> {
        if !(self.mass_kg > 0.0) {
            return Err(Error::Invariant(format!(
                "robot.mass_kg must be > 0, got {}",
                self.mass_kg
            )));
        }
        if !(0.0..90.0).contains(&self.incline_deg) {
            return Err(Error::Invariant(format!(
                "robot.incline_deg must satisfy 0 <= incline < 90, got {}",
                self.incline_deg
            )));
        }
        for (name, v) in [
            ("belt_contact_length_mm", self.belt_contact_length_mm),
            ("belt_spacing_mm", self.belt_spacing_mm),
            ("belt_width_mm", self.belt_width_mm),
            ("gravity_m_s2", self.gravity_m_s2),
        ] {
            if !(v > 0.0) {
                return Err(Error::Invariant(format!(
                    "robot.{name} must be > 0, got {v}"
                )));
            }
        }
        if self.belt_spacing_mm + self.belt_width_mm > panel_width_mm {
            return Err(Error::Invariant(format!(
                "robot belts do not fit on the panel: belt_spacing_mm + belt_width_mm = {} exceeds panel width {}",
                self.belt_spacing_mm + self.belt_width_mm,
                panel_width_mm
            )));
        }
        if let Some(kgf) = self.force_override_kgf {
            if !(kgf >= 0.0) {
                return Err(Error::Invariant(format!(
                    "robot.force_override_kgf must be >= 0, got {kgf}"
                )));
            }
        }
        Ok(())
    }
}

/// Trajectory kind, mirroring the two operational movement cases plus a
/// pinned single position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    CentralLinear,
    SideLinear,
    SinglePosition,
}

/// Resolved robot trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: ScenarioKind,
    /// First sweep position (robot center x), mm. Ignored for
    /// `single_position`.
    pub start_mm: f64,
    pub step_mm: f64,
    pub count: usize,
    /// Side case: gap between the outer belt edge and the nearest long
    /// panel edge.
    pub lateral_offset_mm: f64,
    /// Single-position case: robot center.
    pub center_x_mm: f64,
    pub center_y_mm: f64,
}

impl Scenario {
    fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::Invariant(format!(
                "scenario.count must be >= 1, got {}",
                self.count
            )));
        }
        if !(self.step_mm > 0.0) {
            return Err(Error::Invariant(format!(
                "scenario.step_mm must be > 0, got {}",
                self.step_mm
            )));
        }
        if !(self.lateral_offset_mm >= 0.0) {
            return Err(Error::Invariant(format!(
                "scenario.lateral_offset_mm must be >= 0, got {}",
                self.lateral_offset_mm
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Banded Cholesky factorization of the reduced system.
    Direct,
    /// Jacobi-preconditioned conjugate gradients.
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClampMode {
    /// Fix w and both rotations at clamp nodes.
    FixAll,
    /// Fix only the transverse displacement.
    PinW,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub method: SolveMethod,
    pub clamp_mode: ClampMode,
    pub cg_tolerance: f64,
    pub cg_max_iterations: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            method: SolveMethod::Direct,
            clamp_mode: ClampMode::FixAll,
            cg_tolerance: 1.0e-10,
            cg_max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldFormat {
    CsvGrid,
    VtkLegacy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    pub directory: String,
    pub format: FieldFormat,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            directory: "out".into(),
            format: FieldFormat::CsvGrid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSettings {
    pub target_size_mm: f64,
}

/// Fully resolved run configuration. Every field is concrete; reloading a
/// serialized `SimulationConfig` reproduces it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub panel: PanelModel,
    pub robot: RobotLoad,
    pub mesh: MeshSettings,
    pub scenario: Scenario,
    pub solver: SolverSettings,
    pub output: OutputSettings,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        resolve(RawConfig::default()).expect("default config must resolve")
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.panel.validate()?;
        self.robot.validate(self.panel.width_mm)?;
        self.scenario.validate()?;
        let min_belt_dim = self
            .robot
            .belt_contact_length_mm
            .min(self.robot.belt_width_mm);
        if !(self.mesh.target_size_mm > 0.0 && self.mesh.target_size_mm <= min_belt_dim) {
            return Err(Error::Invariant(format!(
                "mesh.target_size_mm must satisfy 0 < size <= min belt dimension ({min_belt_dim}), got {}",
                self.mesh.target_size_mm
            )));
        }
        if !(self.solver.cg_tolerance > 0.0) {
            return Err(Error::Invariant(format!(
                "solver.cg_tolerance must be > 0, got {}",
                self.solver.cg_tolerance
            )));
        }
        Ok(())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes to TOML")
    }

    /// SHA-256 of the canonical serialized form, `sha256:<hex>`.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(self.to_toml_string().as_bytes());
        format!("sha256:{:x}", hasher.finalize())
    }
}

/// Force normal to an inclined panel surface: F = m · g · cos(incline).
pub fn normal_force(mass_kg: f64, incline_deg: f64, gravity_m_s2: f64) -> f64 {
    mass_kg * gravity_m_s2 * incline_deg.to_radians().cos()
}

/// Thin-plate flexural rigidity D = E t³ / (12 (1 − ν²)), N·m.
pub fn flexural_rigidity(youngs_modulus_pa: f64, thickness_m: f64, poisson_ratio: f64) -> f64 {
    youngs_modulus_pa * thickness_m.powi(3) / (12.0 * (1.0 - poisson_ratio * poisson_ratio))
}

// ---------------------------------------------------------------------------
// Configuration ingestion
// ---------------------------------------------------------------------------

// Raw mirror of the published schema: every key optional, unknown keys
// rejected. Defaults that depend on other values (clamp pads on panel
// length, sweep start on belt length) are resolved here, so the resolved
// config never guesses.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    panel: RawPanel,
    #[serde(default)]
    robot: RawRobot,
    #[serde(default)]
    mesh: RawMesh,
    #[serde(default)]
    scenario: RawScenario,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPanel {
    length_mm: Option<f64>,
    width_mm: Option<f64>,
    glass_thickness_mm: Option<f64>,
    frame_depth_mm: Option<f64>,
    include_self_weight: Option<bool>,
    glass: Option<MaterialProps>,
    frame_material: Option<MaterialProps>,
    frame_section: Option<FrameSection>,
    clamp_pads: Option<Vec<ClampPad>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    mass_kg: Option<f64>,
    incline_deg: Option<f64>,
    belt_contact_length_mm: Option<f64>,
    belt_spacing_mm: Option<f64>,
    belt_width_mm: Option<f64>,
    gravity_m_s2: Option<f64>,
    force_override_kgf: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMesh {
    target_size_mm: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: Option<ScenarioKind>,
    start_mm: Option<f64>,
    step_mm: Option<f64>,
    count: Option<usize>,
    lateral_offset_mm: Option<f64>,
    center_x_mm: Option<f64>,
    center_y_mm: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    method: Option<SolveMethod>,
    clamp_mode: Option<ClampMode>,
    cg_tolerance: Option<f64>,
    cg_max_iterations: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    directory: Option<String>,
    format: Option<FieldFormat>,
}

fn resolve(raw: RawConfig) -> Result<SimulationConfig> {
    let length_mm = raw.panel.length_mm.unwrap_or(1956.0);
    let panel = PanelModel {
        length_mm,
        width_mm: raw.panel.width_mm.unwrap_or(992.0),
        glass_thickness_mm: raw.panel.glass_thickness_mm.unwrap_or(3.5),
        frame_depth_mm: raw.panel.frame_depth_mm.unwrap_or(40.0),
        include_self_weight: raw.panel.include_self_weight.unwrap_or(false),
        glass: raw
            .panel
            .glass
            .unwrap_or_else(MaterialProps::tempered_glass),
        frame_material: raw
            .panel
            .frame_material
            .unwrap_or_else(MaterialProps::aluminum_6063_t5),
        frame_section: raw.panel.frame_section.unwrap_or_default(),
        clamp_pads: raw
            .panel
            .clamp_pads
            .unwrap_or_else(|| PanelModel::default_clamp_pads(length_mm)),
    };
    let robot = RobotLoad {
        mass_kg: raw.robot.mass_kg.unwrap_or(83.0),
        incline_deg: raw.robot.incline_deg.unwrap_or(10.0),
        belt_contact_length_mm: raw.robot.belt_contact_length_mm.unwrap_or(590.0),
        belt_spacing_mm: raw.robot.belt_spacing_mm.unwrap_or(673.0),
        belt_width_mm: raw.robot.belt_width_mm.unwrap_or(50.0),
        gravity_m_s2: raw.robot.gravity_m_s2.unwrap_or(STANDARD_GRAVITY_M_S2),
        force_override_kgf: raw.robot.force_override_kgf,
    };
    let kind = raw.scenario.kind.unwrap_or(ScenarioKind::SideLinear);
    let scenario = Scenario {
        kind,
        start_mm: raw
            .scenario
            .start_mm
            .unwrap_or(robot.belt_contact_length_mm / 2.0),
        step_mm: raw.scenario.step_mm.unwrap_or(120.0),
        count: raw.scenario.count.unwrap_or(10),
        lateral_offset_mm: raw.scenario.lateral_offset_mm.unwrap_or(0.0),
        center_x_mm: raw.scenario.center_x_mm.unwrap_or(panel.length_mm / 2.0),
        center_y_mm: raw.scenario.center_y_mm.unwrap_or(panel.width_mm / 2.0),
    };
    let solver = SolverSettings {
        method: raw.solver.method.unwrap_or(SolveMethod::Direct),
        clamp_mode: raw.solver.clamp_mode.unwrap_or(ClampMode::FixAll),
        cg_tolerance: raw.solver.cg_tolerance.unwrap_or(1.0e-10),
        cg_max_iterations: raw.solver.cg_max_iterations.unwrap_or(20_000),
    };
    let output = OutputSettings {
        directory: raw.output.directory.unwrap_or_else(|| "out".into()),
        format: raw.output.format.unwrap_or(FieldFormat::CsvGrid),
    };
    let config = SimulationConfig {
        panel,
        robot,
        mesh: MeshSettings {
            target_size_mm: raw.mesh.target_size_mm.unwrap_or(10.0),
        },
        scenario,
        solver,
        output,
    };
    config.validate()?;
    Ok(config)
}

/// Parse a TOML configuration document, apply defaults, and validate every
/// invariant. Errors name the offending key or rule.
pub fn load_config(document: &str) -> Result<SimulationConfig> {
    let raw: RawConfig =
        toml::from_str(document).map_err(|e| Error::Config(e.message().to_string()))?;
    resolve(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn minimal_document_resolves_to_published_defaults() {
        let cfg = load_config("").unwrap();
        assert_eq!(cfg.panel.length_mm, 1956.0);
        assert_eq!(cfg.panel.width_mm, 992.0);
        assert_eq!(cfg.panel.glass_thickness_mm, 3.5);
        assert_eq!(cfg.panel.glass.youngs_modulus_pa, 73.0e9);
        assert_eq!(cfg.panel.glass.poisson_ratio, 0.23);
        assert_eq!(cfg.panel.frame_material.youngs_modulus_pa, 70.0e9);
        assert_eq!(cfg.panel.frame_material.mass_density_kg_m3, 2700.0);
        assert_eq!(cfg.robot.mass_kg, 83.0);
        assert_eq!(cfg.robot.incline_deg, 10.0);
        assert_eq!(cfg.robot.belt_contact_length_mm, 590.0);
        assert_eq!(cfg.robot.belt_spacing_mm, 673.0);
        assert_eq!(cfg.mesh.target_size_mm, 10.0);
        assert_eq!(cfg.panel.clamp_pads.len(), 4);
        assert_eq!(
            cfg.panel.clamp_pads[1].center_offset_from_short_edge_mm,
            1756.0
        );
        assert!(!cfg.panel.include_self_weight);
    }

    #[test]
    fn out_of_range_poisson_ratio_names_the_rule() {
        let doc = "[panel.glass]\nyoungs_modulus_pa = 73e9\npoisson_ratio = 0.6\nmass_density_kg_m3 = 2500.0\n";
        let err = load_config(doc).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("poisson_ratio"), "message was: {msg}");
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let err = load_config("[panel]\nlenght_mm = 1956.0\n").unwrap_err();
        assert!(err.to_string().contains("lenght_mm"));
    }

    #[test]
    fn grid_cells_for_default_panel_at_10mm() {
        // ceil(1956/10) x ceil(992/10)
        let cfg = load_config("[mesh]\ntarget_size_mm = 10.0\n").unwrap();
        let nx = (cfg.panel.length_mm / cfg.mesh.target_size_mm).ceil() as usize;
        let ny = (cfg.panel.width_mm / cfg.mesh.target_size_mm).ceil() as usize;
        assert_eq!((nx, ny), (196, 100));
    }

    #[test]
    fn normal_force_matches_hand_computation() {
        // 83 * 9.80665 * cos(10 deg) = 801.586...
        let f = normal_force(83.0, 10.0, STANDARD_GRAVITY_M_S2);
        assert_relative_eq!(f, 801.586, epsilon = 1.0e-3);
        // kgf equivalent 81.74
        assert_relative_eq!(f / N_PER_KGF, 81.739, epsilon = 1.0e-3);
    }

    #[test]
    fn normal_force_edge_cases() {
        assert_eq!(normal_force(0.0, 37.0, STANDARD_GRAVITY_M_S2), 0.0);
        assert!(normal_force(83.0, 90.0, STANDARD_GRAVITY_M_S2).abs() < 1.0e-10);
    }

    #[test]
    fn normal_force_monotone_in_incline_linear_in_mass() {
        let mut prev = f64::INFINITY;
        for step in 0..=90 {
            let f = normal_force(83.0, step as f64, STANDARD_GRAVITY_M_S2);
            assert!(f <= prev);
            prev = f;
        }
        let f1 = normal_force(10.0, 25.0, STANDARD_GRAVITY_M_S2);
        let f2 = normal_force(30.0, 25.0, STANDARD_GRAVITY_M_S2);
        assert_relative_eq!(3.0 * f1, f2, max_relative = 1.0e-12);
    }

    #[test]
    fn flexural_rigidity_of_default_glass() {
        // 73e9 * 0.0035^3 / (12 * (1 - 0.23^2)) = 275.39 N·m
        let d = flexural_rigidity(73.0e9, 0.0035, 0.23);
        assert_relative_eq!(d, 275.39, epsilon = 0.01);
    }

    #[test]
    fn flexural_rigidity_limits() {
        let e = 5.0e9;
        let t = 0.004;
        assert_relative_eq!(
            flexural_rigidity(e, t, 0.0),
            e * t * t * t / 12.0,
            max_relative = 1.0e-14
        );
        let d1 = flexural_rigidity(e, t, 0.3);
        let d2 = flexural_rigidity(e, 2.0 * t, 0.3);
        assert_relative_eq!(d2, 8.0 * d1, max_relative = 1.0e-12);
    }

    #[test]
    fn force_override_pins_surface_force() {
        let cfg = load_config("[robot]\nforce_override_kgf = 81.5\n").unwrap();
        assert_relative_eq!(
            cfg.robot.normal_force_n(),
            81.5 * N_PER_KGF,
            max_relative = 1.0e-15
        );
    }

    #[test]
    fn load_config_round_trip_is_identical() {
        let cfg = load_config("[scenario]\nkind = \"central_linear\"\n").unwrap();
        let reloaded = load_config(&cfg.to_toml_string()).unwrap();
        assert_eq!(cfg, reloaded);
        assert_eq!(cfg.digest(), reloaded.digest());
    }

    #[test]
    fn mesh_size_must_not_exceed_belt_dimensions() {
        let err = load_config("[mesh]\ntarget_size_mm = 60.0\n").unwrap_err();
        assert!(err.to_string().contains("target_size_mm"));
    }
}
