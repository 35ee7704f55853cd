use std::path::PathBuf;

use thiserror::Error;

/// Broad failure class, used by callers (the CLI) to map errors onto
/// stable process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad configuration or input data.
    Config,
    /// Numerical failure in a solver or analysis routine.
    Solver,
    /// Filesystem / I/O failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("config: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("mesh target size {target_mm} mm is too coarse for a {length_mm} x {width_mm} mm panel (must be < min(length, width)/4)")]
    ExcessiveMeshSize {
        target_mm: f64,
        length_mm: f64,
        width_mm: f64,
    },

    #[error("clamp pad at {center_mm} mm (width {width_mm} mm) captures no mesh nodes; refine the mesh or widen the pad")]
    EmptyPad { center_mm: f64, width_mm: f64 },

    #[error("line {0} lies outside the panel rectangle")]
    OutOfPanel(String),

    #[error("degenerate sweep: every position places the robot entirely off the panel")]
    DegenerateSweep,

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("iterative solve did not converge: relative residual {residual:.3e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("rank-deficient fit: need at least 3 distinct sample positions, got {0}")]
    RankDeficient(usize),

    #[error("profile alignment failed: only {common} common positions (need >= 3)")]
    Alignment { common: usize },

    #[error("zero variance in the {0} series; correlation is undefined")]
    ZeroVariance(String),

    #[error("parse error in {path}, line {line}: {message}")]
    CsvParse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_)
            | Error::Invariant(_)
            | Error::ExcessiveMeshSize { .. }
            | Error::EmptyPad { .. }
            | Error::OutOfPanel(_)
            | Error::DegenerateSweep
            | Error::CsvParse { .. } => ErrorClass::Config,
            Error::SingularSystem(_)
            | Error::NonConvergence { .. }
            | Error::RankDeficient(_)
            | Error::Alignment { .. }
            | Error::ZeroVariance(_) => ErrorClass::Solver,
            Error::Io { .. } => ErrorClass::Io,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
