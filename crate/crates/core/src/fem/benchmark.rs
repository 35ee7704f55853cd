//! Analytical plate benchmarks backing trust in the production solves.
//!
//! The simply supported cases are checked against the Navier double sine
//! series; the clamped case against the classical center-deflection
//! coefficient 0.00126·q·a⁴/D.

use serde::Serialize;

use crate::error::Result;
use crate::fem::{apply_constraint_dofs, assemble, solve, DeflectionField};
use crate::loading::distributed_pressure;
use crate::mesh::{dof_index, DofKind, PlateMesh};
use crate::model::{flexural_rigidity, MaterialProps, SolverSettings};

/// Square benchmark plate: 1 m side, 10 mm thickness, tempered-glass
/// constants, 1 kPa uniform pressure.
pub const BENCH_SIDE_MM: f64 = 1000.0;
pub const BENCH_THICKNESS_MM: f64 = 10.0;
pub const BENCH_PRESSURE_PA: f64 = 1000.0;

/// Center patch used by the patch benchmark, as a fraction of the side.
const PATCH_FRACTION: f64 = 0.5;

/// Classical clamped-plate center coefficient: w = α·q·a⁴/D.
const ALPHA_CCCC: f64 = 0.00126;

/// Cells per side at the default (10 mm equivalent) benchmark density.
pub const DEFAULT_CELLS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkCase {
    SsssUniform,
    CcccUniform,
    SsssPatch,
}

impl BenchmarkCase {
    pub const ALL: [BenchmarkCase; 3] = [
        BenchmarkCase::SsssUniform,
        BenchmarkCase::CcccUniform,
        BenchmarkCase::SsssPatch,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchmarkCase::SsssUniform => "ssss_uniform",
            BenchmarkCase::CcccUniform => "cccc_uniform",
            BenchmarkCase::SsssPatch => "ssss_patch",
        }
    }

    /// Acceptance tolerance on the relative center-deflection error.
    pub fn tolerance(&self) -> f64 {
        match self {
            BenchmarkCase::SsssUniform => 0.01,
            BenchmarkCase::CcccUniform => 0.02,
            BenchmarkCase::SsssPatch => 0.01,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkReport {
    pub case: BenchmarkCase,
    pub cells_per_side: usize,
    pub computed_mm: f64,
    pub analytical_mm: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Center deflection of a simply supported rectangular plate under a
/// uniform pressure over a centered patch (u × v at ξ, η), by the Navier
/// double sine series. The full-plate patch reproduces the uniform-load
/// series exactly.
pub fn navier_patch_center(
    a_m: f64,
    b_m: f64,
    rigidity: f64,
    pressure_pa: f64,
    patch_center_x_m: f64,
    patch_center_y_m: f64,
    patch_u_m: f64,
    patch_v_m: f64,
) -> f64 {
    use std::f64::consts::PI;
    let (x, y) = (a_m / 2.0, b_m / 2.0);
    let mut w = 0.0;
    // |q_mn| decays like 1/(mn) and the response like 1/(m²+n²)², so a
    // few hundred terms reach well past f64 precision at the center.
    const TERMS: usize = 399;
    for m in (1..=TERMS).step_by(2) {
        let mf = m as f64;
        for n in (1..=TERMS).step_by(2) {
            let nf = n as f64;
            let q_mn = (16.0 * pressure_pa / (PI * PI * mf * nf))
                * (mf * PI * patch_center_x_m / a_m).sin()
                * (nf * PI * patch_center_y_m / b_m).sin()
                * (mf * PI * patch_u_m / (2.0 * a_m)).sin()
                * (nf * PI * patch_v_m / (2.0 * b_m)).sin();
            let denom = (mf / a_m).powi(2) + (nf / b_m).powi(2);
            w += q_mn / (PI.powi(4) * rigidity * denom * denom)
                * (mf * PI * x / a_m).sin()
                * (nf * PI * y / b_m).sin();
        }
    }
    w
}

pub fn navier_uniform_center(a_m: f64, b_m: f64, rigidity: f64, pressure_pa: f64) -> f64 {
    navier_patch_center(
        a_m,
        b_m,
        rigidity,
        pressure_pa,
        a_m / 2.0,
        b_m / 2.0,
        a_m,
        b_m,
    )
}

fn bench_material() -> MaterialProps {
    MaterialProps::tempered_glass()
}

fn bench_rigidity() -> f64 {
    let mat = bench_material();
    flexural_rigidity(
        mat.youngs_modulus_pa,
        BENCH_THICKNESS_MM / 1000.0,
        mat.poisson_ratio,
    )
}

/// Solve the benchmark plate and return the center deflection in mm
/// (positive toward the load).
fn solve_bench_case(case: BenchmarkCase, cells: usize) -> Result<f64> {
    let mesh = PlateMesh::build(BENCH_SIDE_MM, BENCH_SIDE_MM, BENCH_SIDE_MM / cells as f64)?;
    let material = bench_material();
    let mut system = assemble(&mesh, &material, BENCH_THICKNESS_MM, None);

    let (x0, x1, y0, y1) = match case {
        BenchmarkCase::SsssPatch => {
            let half = PATCH_FRACTION * BENCH_SIDE_MM / 2.0;
            (
                BENCH_SIDE_MM / 2.0 - half,
                BENCH_SIDE_MM / 2.0 + half,
                BENCH_SIDE_MM / 2.0 - half,
                BENCH_SIDE_MM / 2.0 + half,
            )
        }
        _ => (0.0, BENCH_SIDE_MM, 0.0, BENCH_SIDE_MM),
    };
    system.set_load(distributed_pressure(
        &mesh,
        x0,
        x1,
        y0,
        y1,
        BENCH_PRESSURE_PA,
    ));

    // boundary conditions: w everywhere on the boundary; clamped adds
    // both rotations, simple support only the edge-tangential slope
    let mut dofs = Vec::new();
    let clamped = matches!(case, BenchmarkCase::CcccUniform);
    for i in 0..=mesh.nx {
        for j in [0, mesh.ny] {
            let node = mesh.node_index(i, j);
            dofs.push(dof_index(node, DofKind::W));
            dofs.push(dof_index(node, DofKind::ThetaY));
            if clamped {
                dofs.push(dof_index(node, DofKind::ThetaX));
            }
        }
    }
    for j in 0..=mesh.ny {
        for i in [0, mesh.nx] {
            let node = mesh.node_index(i, j);
            dofs.push(dof_index(node, DofKind::W));
            dofs.push(dof_index(node, DofKind::ThetaX));
            if clamped {
                dofs.push(dof_index(node, DofKind::ThetaY));
            }
        }
    }
    apply_constraint_dofs(&mut system, &dofs);

    let solution = solve(&system, &SolverSettings::default())?;
    let field = DeflectionField::from_solution(&mesh, &solution, "benchmark");
    let center = mesh.node_index(mesh.nx / 2, mesh.ny / 2);
    Ok(field.w_mm[center])
}

pub fn analytical_center_mm(case: BenchmarkCase) -> f64 {
    let a = BENCH_SIDE_MM / 1000.0;
    let d = bench_rigidity();
    let w_m = match case {
        BenchmarkCase::SsssUniform => navier_uniform_center(a, a, d, BENCH_PRESSURE_PA),
        BenchmarkCase::SsssPatch => navier_patch_center(
            a,
            a,
            d,
            BENCH_PRESSURE_PA,
            a / 2.0,
            a / 2.0,
            PATCH_FRACTION * a,
            PATCH_FRACTION * a,
        ),
        BenchmarkCase::CcccUniform => ALPHA_CCCC * BENCH_PRESSURE_PA * a.powi(4) / d,
    };
    w_m * 1000.0
}

pub fn verify_benchmark_with(case: BenchmarkCase, cells: usize) -> Result<BenchmarkReport> {
    let computed_mm = solve_bench_case(case, cells)?;
    let analytical_mm = analytical_center_mm(case);
    let relative_error = ((computed_mm - analytical_mm) / analytical_mm).abs();
    let tolerance = case.tolerance();
    Ok(BenchmarkReport {
        case,
        cells_per_side: cells,
        computed_mm,
        analytical_mm,
        relative_error,
        tolerance,
        passed: relative_error <= tolerance,
    })
}

pub fn verify_benchmark(case: BenchmarkCase) -> Result<BenchmarkReport> {
    verify_benchmark_with(case, DEFAULT_CELLS)
}
