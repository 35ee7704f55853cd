//! Deflection profile extraction, quadratic fitting, extremum location,
//! and correlation between profile pairs.
//!
//! Sign convention: profile deflections are negative downward (toward
//! the ground), the opposite of `DeflectionField::w_mm` which is
//! positive toward the load.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::DeflectionField;
use crate::mesh::{extraction_line, LineSpec, PlateMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    Simulation,
    Experiment,
}

impl std::fmt::Display for ProfileSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProfileSource::Simulation => write!(f, "simulation"),
            ProfileSource::Experiment => write!(f, "experiment"),
        }
    }
}

/// Deflection sampled along a straight cross-section line.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub positions_mm: Vec<f64>,
    pub deflections_mm: Vec<f64>,
    /// Human-readable description of the sampled line.
    pub line: String,
    pub source: ProfileSource,
}

impl Profile {
    /// Positions must be strictly increasing and non-empty. Operations
    /// that need more samples (fit, correlation) enforce their own
    /// minimum counts.
    pub fn new(
        positions_mm: Vec<f64>,
        deflections_mm: Vec<f64>,
        line: String,
        source: ProfileSource,
    ) -> Result<Self> {
        if positions_mm.is_empty() || positions_mm.len() != deflections_mm.len() {
            return Err(Error::Invariant(
                "profile must contain matched, non-empty position/deflection columns".into(),
            ));
        }
        for k in 1..positions_mm.len() {
            if positions_mm[k] <= positions_mm[k - 1] {
                return Err(Error::Invariant(format!(
                    "profile positions must be strictly increasing (sample {} at {} mm after {} mm)",
                    k + 1,
                    positions_mm[k],
                    positions_mm[k - 1]
                )));
            }
        }
        Ok(Self {
            positions_mm,
            deflections_mm,
            line,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.positions_mm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions_mm.is_empty()
    }
}

/// Sample the solved field along a cross-section line at a fixed step,
/// interpolating linearly between the nodes of the snapped grid line.
/// `window` restricts the sampled range of the running coordinate; the
/// default covers the whole line starting at 0.
pub fn extract_profile(
    field: &DeflectionField,
    mesh: &PlateMesh,
    line: LineSpec,
    step_mm: f64,
    window: Option<(f64, f64)>,
) -> Result<Profile> {
    if !(step_mm > 0.0) {
        return Err(Error::Invariant(format!(
            "profile step must be > 0, got {step_mm}"
        )));
    }
    let ex = extraction_line(mesh, line)?;
    let line_end = *ex.positions_mm.last().unwrap();
    let (w0, w1) = window.unwrap_or((0.0, line_end));
    if w0 < -1.0e-9 || w1 > line_end + 1.0e-9 || w1 <= w0 {
        return Err(Error::OutOfPanel(format!("window {w0}..{w1} mm")));
    }
    let spacing = ex.positions_mm[1] - ex.positions_mm[0];
    let count = ((w1 - w0) / step_mm + 1.0e-9).floor() as usize + 1;
    let mut positions = Vec::with_capacity(count);
    let mut deflections = Vec::with_capacity(count);
    for k in 0..count {
        let pos = w0 + k as f64 * step_mm;
        let t = (pos / spacing).clamp(0.0, (ex.nodes.len() - 1) as f64);
        let seg = (t.floor() as usize).min(ex.nodes.len() - 2);
        let frac = t - seg as f64;
        let wa = field.w_mm[ex.nodes[seg]];
        let wb = field.w_mm[ex.nodes[seg + 1]];
        positions.push(pos);
        // field w is positive toward the load; profiles are negative down
        deflections.push(-(wa + frac * (wb - wa)));
    }
    Profile::new(
        positions,
        deflections,
        format!(
            "{} (snapped to {}, snap distance {} mm)",
            line, ex.snapped_mm, ex.snap_distance_mm
        ),
        ProfileSource::Simulation,
    )
}

/// Least-squares quadratic y = a·x² + b·x + c over a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFit {
    pub a_per_mm: f64,
    pub b: f64,
    pub c_mm: f64,
    /// Residual sum of squares, mm².
    pub rss_mm2: f64,
    pub r_squared: f64,
    /// (x*, y*) of the parabola when the quadratic term is nonzero.
    pub vertex: Option<(f64, f64)>,
    pub n: usize,
    pub window_mm: (f64, f64),
}

/// Ordinary least squares on the windowed samples. The normal system is
/// solved in centered/scaled coordinates and expanded back, so the
/// coefficients are recovered at machine accuracy even for positions in
/// the thousands.
pub fn fit_quadratic(profile: &Profile, window: Option<(f64, f64)>) -> Result<ProfileFit> {
    let (w0, w1) = window.unwrap_or((
        profile.positions_mm[0],
        *profile.positions_mm.last().unwrap(),
    ));
    let samples: Vec<(f64, f64)> = profile
        .positions_mm
        .iter()
        .zip(&profile.deflections_mm)
        .filter(|(&x, _)| x >= w0 - 1.0e-9 && x <= w1 + 1.0e-9)
        .map(|(&x, &y)| (x, y))
        .collect();
    let mut distinct = 0usize;
    let mut last = f64::NAN;
    for &(x, _) in &samples {
        if x != last {
            distinct += 1;
            last = x;
        }
    }
    if distinct < 3 {
        return Err(Error::RankDeficient(distinct));
    }

    let n = samples.len();
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / n as f64;
    let x_span = samples.last().unwrap().0 - samples[0].0;
    let scale = if x_span > 0.0 { x_span / 2.0 } else { 1.0 };

    // normal equations in u = (x − mean)/scale
    let mut s = [0.0f64; 5]; // Σ u^k, k = 0..4
    let mut t = [0.0f64; 3]; // Σ y·u^k, k = 0..2
    for &(x, y) in &samples {
        let u = (x - mean_x) / scale;
        let u2 = u * u;
        s[0] += 1.0;
        s[1] += u;
        s[2] += u2;
        s[3] += u2 * u;
        s[4] += u2 * u2;
        t[0] += y;
        t[1] += y * u;
        t[2] += y * u2;
    }
    let m = nalgebra::Matrix3::new(
        s[0], s[1], s[2], //
        s[1], s[2], s[3], //
        s[2], s[3], s[4],
    );
    let rhs = nalgebra::Vector3::new(t[0], t[1], t[2]);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::RankDeficient(distinct))?;
    let (c_u, b_u, a_u) = (sol[0], sol[1], sol[2]);

    // expand y = a_u u² + b_u u + c_u back to x
    let a = a_u / (scale * scale);
    let b = b_u / scale - 2.0 * a_u * mean_x / (scale * scale);
    let c = c_u - b_u * mean_x / scale + a_u * mean_x * mean_x / (scale * scale);

    let mut rss = 0.0;
    let mut tss = 0.0;
    let mean_y = t[0] / n as f64;
    for &(x, y) in &samples {
        let u = (x - mean_x) / scale;
        let fit = a_u * u * u + b_u * u + c_u;
        rss += (y - fit) * (y - fit);
        tss += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if tss > 0.0 {
        1.0 - rss / tss
    } else if rss <= 1.0e-24 {
        1.0
    } else {
        f64::NEG_INFINITY
    };

    // treat the quadratic term as zero when it is negligible against the
    // sample scales (a carries units of y/x²)
    let y_scale = samples
        .iter()
        .map(|s| (s.1 - mean_y).abs())
        .fold(0.0f64, f64::max);
    let a_threshold = 1.0e-12 * y_scale / (scale * scale);
    let vertex = if a.abs() > a_threshold {
        let xv = -b / (2.0 * a);
        Some((xv, a * xv * xv + b * xv + c))
    } else {
        None
    };

    Ok(ProfileFit {
        a_per_mm: a,
        b,
        c_mm: c,
        rss_mm2: rss,
        r_squared,
        vertex,
        n,
        window_mm: (w0, w1),
    })
}

/// Position and value of the most negative sample; ties go to the
/// smallest position.
pub fn min_deflection(profile: &Profile) -> (f64, f64) {
    let mut best = (profile.positions_mm[0], profile.deflections_mm[0]);
    for (&x, &y) in profile.positions_mm.iter().zip(&profile.deflections_mm) {
        if y < best.1 {
            best = (x, y);
        }
    }
    best
}

/// Pearson correlation over exactly matching sample positions.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub r: f64,
    pub n: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub variance_a: f64,
    pub variance_b: f64,
    /// Positions the two profiles were paired on.
    pub positions_mm: Vec<f64>,
}

const ALIGN_EPS_MM: f64 = 1.0e-6;

/// r = Σ(xᵢ−x̄)(yᵢ−ȳ) / ((n−1)·√(s_x²·s_y²)) with sample variances
/// s² = Σ(aᵢ−ā)²/(n−1), over positions matching within 1e-6 mm. No
/// resampling happens here; aligning differently-sampled profiles is the
/// caller's job.
pub fn pearson(a: &Profile, b: &Profile) -> Result<CorrelationReport> {
    let mut pairs: Vec<(f64, f64, f64)> = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        let (xa, xb) = (a.positions_mm[i], b.positions_mm[j]);
        if (xa - xb).abs() <= ALIGN_EPS_MM {
            pairs.push((xa, a.deflections_mm[i], b.deflections_mm[j]));
            i += 1;
            j += 1;
        } else if xa < xb {
            i += 1;
        } else {
            j += 1;
        }
    }
    let n = pairs.len();
    if n < 3 {
        return Err(Error::Alignment { common: n });
    }
    let nf = n as f64;
    let mean_a = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let mean_b = pairs.iter().map(|p| p.2).sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut ssa = 0.0;
    let mut ssb = 0.0;
    for &(_, ya, yb) in &pairs {
        let (da, db) = (ya - mean_a, yb - mean_b);
        cov += da * db;
        ssa += da * da;
        ssb += db * db;
    }
    let variance_a = ssa / (nf - 1.0);
    let variance_b = ssb / (nf - 1.0);
    if variance_a == 0.0 {
        return Err(Error::ZeroVariance("first".into()));
    }
    if variance_b == 0.0 {
        return Err(Error::ZeroVariance("second".into()));
    }
    let r = cov / ((nf - 1.0) * (variance_a * variance_b).sqrt());
    Ok(CorrelationReport {
        r,
        n,
        mean_a,
        mean_b,
        variance_a,
        variance_b,
        positions_mm: pairs.into_iter().map(|p| p.0).collect(),
    })
}

/// Discrepancy between the minima of two profiles. The percentage uses
/// the first profile's extremum position as the base; both raw positions
/// are reported so a different base can be applied downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaComparison {
    pub first_position_mm: f64,
    pub first_value_mm: f64,
    pub second_position_mm: f64,
    pub second_value_mm: f64,
    pub delta_position_mm: f64,
    pub delta_position_pct: f64,
    pub delta_value_mm: f64,
}

pub fn compare_extrema(first: &Profile, second: &Profile) -> ExtremaComparison {
    let (xa, ya) = min_deflection(first);
    let (xb, yb) = min_deflection(second);
    let delta_position_mm = (xa - xb).abs();
    ExtremaComparison {
        first_position_mm: xa,
        first_value_mm: ya,
        second_position_mm: xb,
        second_value_mm: yb,
        delta_position_mm,
        delta_position_pct: if xa != 0.0 {
            100.0 * delta_position_mm / xa.abs()
        } else {
            f64::INFINITY
        },
        delta_value_mm: (ya - yb).abs(),
    }
}
