//! End-to-end orchestration: build the model once, solve any number of
//! robot positions against the cached factorization, and summarize.

use rayon::prelude::*;

use crate::error::Result;
use crate::fem::solver::BandedCholesky;
use crate::fem::{
    apply_constraints, assemble, factor_direct, solve_with, DeflectionField, GlobalSystem,
};
use crate::io::SweepRow;
use crate::loading::{belt_footprints, nodal_forces, self_weight_forces, sweep_positions, Footprint};
use crate::mesh::{build_grid, clamp_node_set, PlateMesh};
use crate::model::{ScenarioKind, SimulationConfig, SolveMethod};
use crate::report::BandCheck;

/// Reference worst-case deflection magnitudes the model is validated
/// against, and the accepted band around them.
pub const REFERENCE_SIDE_MAX_MM: f64 = 11.3;
pub const REFERENCE_CENTRAL_MAX_MM: f64 = 10.4;
pub const REFERENCE_BAND_FRACTION: f64 = 0.25;

/// A prepared model: mesh, constrained system, and (for the direct
/// method) the reusable factorization.
pub struct Simulation {
    pub config: SimulationConfig,
    pub digest: String,
    pub mesh: PlateMesh,
    pub clamp_nodes: Vec<usize>,
    system: GlobalSystem,
    factor: Option<BandedCholesky>,
    self_weight: Option<Vec<f64>>,
}

/// One solved robot position.
pub struct PositionResult {
    pub center_x_mm: f64,
    pub center_y_mm: f64,
    pub footprints: [Footprint; 2],
    pub total_force_n: f64,
    /// Sum of transverse nodal loads actually applied, N.
    pub applied_w_load_n: f64,
    pub field: DeflectionField,
    pub max_abs_w_mm: f64,
    pub max_w_x_mm: f64,
    pub max_w_y_mm: f64,
}

pub struct SweepOutcome {
    pub results: Vec<PositionResult>,
    pub worst_index: usize,
}

impl Simulation {
    pub fn prepare(config: SimulationConfig) -> Result<Self> {
        config.validate()?;
        let digest = config.digest();
        let mesh = build_grid(&config.panel, config.mesh.target_size_mm)?;
        let clamp_nodes = clamp_node_set(&mesh, &config.panel.clamp_pads)?;
        let system = assemble(
            &mesh,
            &config.panel.glass,
            config.panel.glass_thickness_mm,
            Some((&config.panel.frame_section, &config.panel.frame_material)),
        );
        let system = apply_constraints(system, &clamp_nodes, config.solver.clamp_mode);
        let factor = match config.solver.method {
            SolveMethod::Direct => Some(factor_direct(&system)?),
            SolveMethod::ConjugateGradient => None,
        };
        let self_weight = config
            .panel
            .include_self_weight
            .then(|| self_weight_forces(&mesh, &config.panel, config.robot.gravity_m_s2));
        Ok(Self {
            config,
            digest,
            mesh,
            clamp_nodes,
            system,
            factor,
            self_weight,
        })
    }

    pub fn system(&self) -> &GlobalSystem {
        &self.system
    }

    pub fn solver_summary(&self) -> String {
        match self.config.solver.method {
            SolveMethod::Direct => match &self.factor {
                Some(f) => format!(
                    "direct banded Cholesky, {} free DOFs, half bandwidth {}",
                    f.n(),
                    f.half_bandwidth()
                ),
                None => "direct banded Cholesky".to_string(),
            },
            SolveMethod::ConjugateGradient => format!(
                "conjugate gradients (Jacobi), tolerance {:e}",
                self.config.solver.cg_tolerance
            ),
        }
    }

    /// Solve one robot position.
    pub fn solve_at(&self, center_x_mm: f64, center_y_mm: f64) -> Result<PositionResult> {
        let (footprints, total_force_n) = belt_footprints(
            &self.config.robot,
            &self.config.panel,
            center_x_mm,
            center_y_mm,
        );
        let mut load = nodal_forces(&self.mesh, &footprints);
        if let Some(sw) = &self.self_weight {
            for (l, s) in load.iter_mut().zip(sw) {
                *l += s;
            }
        }
        let applied_w_load_n = (0..self.mesh.node_count()).map(|n| load[3 * n]).sum();
        let solution = solve_with(&self.system, &self.config.solver, &load, self.factor.as_ref())?;
        let field = DeflectionField::from_solution(&self.mesh, &solution, &self.digest);
        let (max_abs_w_mm, max_w_x_mm, max_w_y_mm) = field.max_abs_w(&self.mesh);
        Ok(PositionResult {
            center_x_mm,
            center_y_mm,
            footprints,
            total_force_n,
            applied_w_load_n,
            field,
            max_abs_w_mm,
            max_w_x_mm,
            max_w_y_mm,
        })
    }

    /// Solve every scenario position. Positions run in parallel on the
    /// current rayon pool; results keep trajectory order, so outputs are
    /// identical for any thread count.
    pub fn sweep(&self) -> Result<SweepOutcome> {
        let positions = sweep_positions(
            &self.config.scenario,
            &self.config.panel,
            &self.config.robot,
        )?;
        let results: Vec<PositionResult> = positions
            .par_iter()
            .map(|&(x, y)| self.solve_at(x, y))
            .collect::<Result<_>>()?;
        let mut worst_index = 0;
        for (k, r) in results.iter().enumerate() {
            if r.max_abs_w_mm > results[worst_index].max_abs_w_mm {
                worst_index = k;
            }
        }
        Ok(SweepOutcome {
            results,
            worst_index,
        })
    }

    /// Cross-section along the inner belt line of the current scenario
    /// (side case: the belt farther from the reference long edge; other
    /// scenarios: the first belt line).
    pub fn inner_belt_line_y(&self) -> f64 {
        let robot = &self.config.robot;
        match self.config.scenario.kind {
            ScenarioKind::SideLinear => {
                self.config.scenario.lateral_offset_mm
                    + robot.belt_width_mm / 2.0
                    + robot.belt_spacing_mm
            }
            _ => self.config.panel.width_mm / 2.0 - robot.belt_spacing_mm / 2.0,
        }
    }

    pub fn band_check(&self, worst_mm: f64) -> Option<BandCheck> {
        let (label, reference) = match self.config.scenario.kind {
            ScenarioKind::SideLinear => ("side_linear", REFERENCE_SIDE_MAX_MM),
            ScenarioKind::CentralLinear => ("central_linear", REFERENCE_CENTRAL_MAX_MM),
            ScenarioKind::SinglePosition => return None,
        };
        let lo = reference * (1.0 - REFERENCE_BAND_FRACTION);
        let hi = reference * (1.0 + REFERENCE_BAND_FRACTION);
        Some(BandCheck {
            label,
            reference_mm: reference,
            lo_mm: lo,
            hi_mm: hi,
            worst_mm,
            within: (lo..=hi).contains(&worst_mm),
        })
    }
}

pub fn sweep_rows(outcome: &SweepOutcome) -> Vec<SweepRow> {
    outcome
        .results
        .iter()
        .enumerate()
        .map(|(index, r)| SweepRow {
            index,
            center_x_mm: r.center_x_mm,
            center_y_mm: r.center_y_mm,
            total_force_n: r.total_force_n,
            max_abs_w_mm: r.max_abs_w_mm,
            max_w_x_mm: r.max_w_x_mm,
            max_w_y_mm: r.max_w_y_mm,
        })
        .collect()
}
