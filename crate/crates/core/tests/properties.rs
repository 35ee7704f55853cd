//! Property tests for the model arithmetic, load conservation, and
//! correlation invariants.

use std::sync::OnceLock;

use proptest::prelude::*;
use pvflex_core::{
    belt_footprints, build_grid, flexural_rigidity, load_config, nodal_forces, normal_force,
    pearson, Profile, ProfileSource, SimulationConfig,
};

fn default_config() -> &'static SimulationConfig {
    static CFG: OnceLock<SimulationConfig> = OnceLock::new();
    CFG.get_or_init(|| load_config("").unwrap())
}

proptest! {
    #[test]
    fn normal_force_monotone_in_incline(mass in 1.0f64..500.0, a in 0.0f64..89.0, b in 0.0f64..89.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let f_lo = normal_force(mass, lo, 9.80665);
        let f_hi = normal_force(mass, hi, 9.80665);
        prop_assert!(f_hi <= f_lo + 1.0e-12 * f_lo.abs());
    }

    #[test]
    fn normal_force_linear_in_mass(mass in 0.1f64..500.0, k in 0.1f64..10.0, incline in 0.0f64..89.0) {
        let f1 = normal_force(mass, incline, 9.80665);
        let fk = normal_force(k * mass, incline, 9.80665);
        prop_assert!((fk - k * f1).abs() <= 1.0e-12 * fk.abs());
    }

    #[test]
    fn rigidity_scales_cubically(e in 1.0e9f64..500.0e9, t in 0.5e-3f64..30.0e-3, nu in 0.0f64..0.49) {
        let d1 = flexural_rigidity(e, t, nu);
        let d2 = flexural_rigidity(e, 2.0 * t, nu);
        prop_assert!((d2 - 8.0 * d1).abs() <= 1.0e-12 * d2);
    }

    #[test]
    fn footprint_force_is_conserved_in_nodal_loads(
        cx in -800.0f64..2800.0,
        cy in 100.0f64..900.0,
    ) {
        let cfg = default_config();
        let mesh = build_grid(&cfg.panel, 40.0).unwrap();
        let (fps, total) = belt_footprints(&cfg.robot, &cfg.panel, cx, cy);
        let load = nodal_forces(&mesh, &fps);
        let sum: f64 = (0..mesh.node_count()).map(|n| load[3 * n]).sum();
        if total == 0.0 {
            prop_assert_eq!(sum, 0.0);
        } else {
            prop_assert!((sum - total).abs() <= 1.0e-9 * total);
        }
    }

    #[test]
    fn pearson_affine_invariance(scale in 0.01f64..50.0, offset in -100.0f64..100.0) {
        let positions: Vec<f64> = (0..40).map(|k| k as f64 * 10.0).collect();
        let ya: Vec<f64> = positions.iter().map(|&x| (x * 0.013).sin() - 0.002 * x).collect();
        let yb: Vec<f64> = positions.iter().map(|&x| (x * 0.011).cos() + 0.001 * x).collect();
        let a = Profile::new(positions.clone(), ya, "a".into(), ProfileSource::Simulation).unwrap();
        let b = Profile::new(positions.clone(), yb.clone(), "b".into(), ProfileSource::Experiment).unwrap();
        let r0 = pearson(&a, &b).unwrap().r;
        let b_affine = Profile::new(
            positions.clone(),
            yb.iter().map(|v| scale * v + offset).collect(),
            "b'".into(),
            ProfileSource::Experiment,
        ).unwrap();
        let r1 = pearson(&a, &b_affine).unwrap().r;
        prop_assert!((r1 - r0).abs() <= 1.0e-12);
        let b_neg = Profile::new(
            positions,
            yb.iter().map(|v| -scale * v + offset).collect(),
            "b''".into(),
            ProfileSource::Experiment,
        ).unwrap();
        let r2 = pearson(&a, &b_neg).unwrap().r;
        prop_assert!((r2 + r0).abs() <= 1.0e-12);
    }

    #[test]
    fn config_resolution_is_idempotent(
        mass in 1.0f64..300.0,
        incline in 0.0f64..60.0,
        thickness in 2.0f64..6.0,
        target in 8.0f64..45.0,
    ) {
        let doc = format!(
            "[robot]\nmass_kg = {mass}\nincline_deg = {incline}\n[panel]\nglass_thickness_mm = {thickness}\n[mesh]\ntarget_size_mm = {target}\n"
        );
        let cfg = load_config(&doc).unwrap();
        let reloaded = load_config(&cfg.to_toml_string()).unwrap();
        prop_assert_eq!(&cfg, &reloaded);
        prop_assert_eq!(cfg.digest(), reloaded.digest());
    }
}
