//! `pvflex` — panel deflection simulator CLI.
//!
//! Subcommands: simulate, sweep, fit, correlate, verify. Exit codes:
//! 0 success, 1 failed verification, 2 configuration/input errors,
//! 3 solver/analysis errors, 4 I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pvflex_core::fem::benchmark::{verify_benchmark_with, BenchmarkCase, DEFAULT_CELLS};
use pvflex_core::io::{write_sweep_csv, write_text};
use pvflex_core::report::{
    render_benchmark_table, render_correlation, render_extrema, render_fit, RunReport,
};
use pvflex_core::{
    compare_extrema, driver, export_field, fit_quadratic, load_config, pearson, read_profile_csv,
    Error, ErrorClass, FieldFormat, LineSpec, ProfileSource, ScenarioKind, Simulation,
    SimulationConfig,
};

#[derive(Parser)]
#[command(name = "pvflex", version, about = "Thin-plate FEM simulator for PV panel deflection under cleaning-robot loads")]
struct Cli {
    /// Configuration file (TOML). Falls back to built-in defaults.
    #[arg(long, global = true, env = "PVFLEX_CONFIG")]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's output.directory).
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    /// Worker threads for sweeps (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Field export format (overrides the config's output.format).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    CsvGrid,
    VtkLegacy,
}

impl From<FormatArg> for FieldFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::CsvGrid => FieldFormat::CsvGrid,
            FormatArg::VtkLegacy => FieldFormat::VtkLegacy,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single robot position and report the deflection field.
    Simulate {
        /// Robot center "x" or "x,y" in mm; defaults to the scenario's
        /// first position.
        #[arg(long)]
        position: Option<String>,
        /// Write the solved field to this path.
        #[arg(long)]
        export_field: Option<PathBuf>,
        /// Extract a deflection profile: "y=<mm>", "x=<mm>", or
        /// "inner-belt".
        #[arg(long)]
        profile: Option<String>,
        /// Sample step along the profile, mm.
        #[arg(long, default_value_t = 10.0)]
        profile_step: f64,
        /// Profile CSV destination (default: <output-dir>/profile.csv).
        #[arg(long)]
        profile_out: Option<PathBuf>,
    },
    /// Solve every scenario position and write the sweep summary CSV.
    Sweep {
        /// Sweep CSV destination (default: <output-dir>/sweep.csv).
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Fit y = a·x² + b·x + c to a profile CSV.
    Fit {
        /// Profile CSV path.
        profile: PathBuf,
        /// Restrict the fit to "min,max" positions in mm.
        #[arg(long)]
        window: Option<String>,
    },
    /// Pearson correlation between two profile CSVs.
    Correlate {
        profile_a: PathBuf,
        profile_b: PathBuf,
    },
    /// Run the analytical plate benchmarks and report errors.
    Verify {
        /// Cells per side for the benchmark plate (even, >= 6).
        #[arg(long, default_value_t = DEFAULT_CELLS)]
        cells: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // a second invocation in-process would fail; the CLI sets it once
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err.class() {
                ErrorClass::Config => 2u8,
                ErrorClass::Solver => 3u8,
                ErrorClass::Io => 4u8,
            })
        }
    }
}

fn load(cli: &Cli) -> Result<SimulationConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            load_config(&text)?
        }
        None => SimulationConfig::default(),
    };
    if let Some(dir) = &cli.output_dir {
        config.output.directory = dir.display().to_string();
    }
    if let Some(format) = cli.format {
        config.output.format = format.into();
    }
    Ok(config)
}

fn out_path(config: &SimulationConfig, explicit: Option<&Path>, default_name: &str) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => Path::new(&config.output.directory).join(default_name),
    }
}

fn parse_position(spec: &str) -> Result<(f64, Option<f64>), Error> {
    let mut parts = spec.split(',');
    let x = parts
        .next()
        .unwrap_or_default()
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("--position: '{spec}' is not 'x' or 'x,y'")))?;
    let y = match parts.next() {
        Some(raw) => Some(raw.trim().parse::<f64>().map_err(|_| {
            Error::Config(format!("--position: '{spec}' is not 'x' or 'x,y'"))
        })?),
        None => None,
    };
    if parts.next().is_some() {
        return Err(Error::Config(format!(
            "--position: '{spec}' has more than two components"
        )));
    }
    Ok((x, y))
}

fn parse_window(spec: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!(
            "--window: '{spec}' is not 'min,max'"
        )));
    }
    let lo = parts[0].trim().parse::<f64>();
    let hi = parts[1].trim().parse::<f64>();
    match (lo, hi) {
        (Ok(lo), Ok(hi)) if lo < hi => Ok((lo, hi)),
        _ => Err(Error::Config(format!(
            "--window: '{spec}' is not a valid 'min,max' range"
        ))),
    }
}

fn parse_line(spec: &str, sim: &Simulation) -> Result<LineSpec, Error> {
    let s = spec.trim();
    if s.eq_ignore_ascii_case("inner-belt") {
        return Ok(LineSpec::FixedY {
            y_mm: sim.inner_belt_line_y(),
        });
    }
    if let Some(v) = s.strip_prefix("y=") {
        return v
            .trim()
            .parse::<f64>()
            .map(|y_mm| LineSpec::FixedY { y_mm })
            .map_err(|_| Error::Config(format!("--profile: bad line spec '{spec}'")));
    }
    if let Some(v) = s.strip_prefix("x=") {
        return v
            .trim()
            .parse::<f64>()
            .map(|x_mm| LineSpec::FixedX { x_mm })
            .map_err(|_| Error::Config(format!("--profile: bad line spec '{spec}'")));
    }
    Err(Error::Config(format!(
        "--profile: expected 'y=<mm>', 'x=<mm>' or 'inner-belt', got '{spec}'"
    )))
}

fn scenario_default_y(config: &SimulationConfig) -> f64 {
    match config.scenario.kind {
        ScenarioKind::CentralLinear => config.panel.width_mm / 2.0,
        ScenarioKind::SideLinear => {
            config.scenario.lateral_offset_mm
                + config.robot.belt_width_mm / 2.0
                + config.robot.belt_spacing_mm / 2.0
        }
        ScenarioKind::SinglePosition => config.scenario.center_y_mm,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Simulate {
            position,
            export_field: export,
            profile,
            profile_step,
            profile_out,
        } => {
            let config = load(cli)?;
            let sim = Simulation::prepare(config)?;
            let (x, y) = match position {
                Some(spec) => {
                    let (x, y) = parse_position(spec)?;
                    (x, y.unwrap_or_else(|| scenario_default_y(&sim.config)))
                }
                None => {
                    let positions = pvflex_core::sweep_positions(
                        &sim.config.scenario,
                        &sim.config.panel,
                        &sim.config.robot,
                    )?;
                    positions[0]
                }
            };
            let result = sim.solve_at(x, y)?;

            let mut sections = Vec::new();
            if let Some(path) = export {
                let path = out_path(&sim.config, Some(path), "field");
                export_field(&result.field, &sim.mesh, &path, sim.config.output.format)?;
                sections.push(format!("field exported to {}\n", path.display()));
            }
            if let Some(line_spec) = profile {
                let line = parse_line(line_spec, &sim)?;
                let prof =
                    pvflex_core::extract_profile(&result.field, &sim.mesh, line, *profile_step, None)?;
                let path = out_path(&sim.config, profile_out.as_deref(), "profile.csv");
                pvflex_core::write_profile_csv(&path, &prof)?;
                sections.push(format!(
                    "profile ({} samples along {}) written to {}\n",
                    prof.len(),
                    prof.line,
                    path.display()
                ));
            }

            let report = RunReport {
                title: "simulate".into(),
                config_digest: sim.digest.clone(),
                mesh_summary: RunReport::mesh_summary(&sim.mesh),
                constrained_nodes: sim.clamp_nodes.len(),
                constrained_dofs: sim.mesh.dof_count()
                    - sim.system().dof_map().map(|m| m.free_count()).unwrap_or(0),
                solver_summary: format!(
                    "{}, backward error {:e}",
                    sim.solver_summary(),
                    result.field.residual
                ),
                positions: vec![pvflex_core::io::SweepRow {
                    index: 0,
                    center_x_mm: result.center_x_mm,
                    center_y_mm: result.center_y_mm,
                    total_force_n: result.total_force_n,
                    max_abs_w_mm: result.max_abs_w_mm,
                    max_w_x_mm: result.max_w_x_mm,
                    max_w_y_mm: result.max_w_y_mm,
                }],
                worst_index: None,
                band: None,
                sections,
            };
            print!("{}", report.render());
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep { csv_out } => {
            let config = load(cli)?;
            let sim = Simulation::prepare(config)?;
            let outcome = sim.sweep()?;
            let rows = driver::sweep_rows(&outcome);
            let csv_path = out_path(&sim.config, csv_out.as_deref(), "sweep.csv");
            write_sweep_csv(&csv_path, &rows)?;
            let worst = &outcome.results[outcome.worst_index];
            let residual_max = outcome
                .results
                .iter()
                .map(|r| r.field.residual)
                .fold(0.0f64, f64::max);
            let report = RunReport {
                title: "sweep".into(),
                config_digest: sim.digest.clone(),
                mesh_summary: RunReport::mesh_summary(&sim.mesh),
                constrained_nodes: sim.clamp_nodes.len(),
                constrained_dofs: sim.mesh.dof_count()
                    - sim.system().dof_map().map(|m| m.free_count()).unwrap_or(0),
                solver_summary: format!(
                    "{}, max backward error {:e}",
                    sim.solver_summary(),
                    residual_max
                ),
                positions: rows,
                worst_index: Some(outcome.worst_index),
                band: sim.band_check(worst.max_abs_w_mm),
                sections: vec![format!("sweep CSV written to {}\n", csv_path.display())],
            };
            let report_text = report.render();
            write_text(
                &out_path(&sim.config, None, "sweep_report.txt"),
                &report_text,
            )?;
            print!("{report_text}");
            Ok(ExitCode::SUCCESS)
        }

        Command::Fit { profile, window } => {
            let prof = read_profile_csv(profile, ProfileSource::Simulation)?;
            let window = window.as_deref().map(parse_window).transpose()?;
            let fit = fit_quadratic(&prof, window)?;
            print!("{}", render_fit(&fit));
            Ok(ExitCode::SUCCESS)
        }

        Command::Correlate {
            profile_a,
            profile_b,
        } => {
            let a = read_profile_csv(profile_a, ProfileSource::Simulation)?;
            let b = read_profile_csv(profile_b, ProfileSource::Experiment)?;
            let report = pearson(&a, &b)?;
            print!("{}", render_correlation(&report));
            print!("{}", render_extrema(&compare_extrema(&a, &b)));
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { cells } => {
            if *cells < 6 || *cells % 2 != 0 {
                return Err(Error::Config(format!(
                    "--cells must be an even number >= 6, got {cells}"
                )));
            }
            let mut reports = Vec::new();
            for case in BenchmarkCase::ALL {
                reports.push(verify_benchmark_with(case, *cells)?);
            }
            print!("{}", render_benchmark_table(&reports));
            if reports.iter().all(|r| r.passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
