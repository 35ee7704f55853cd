//! Rectangular 12-DOF thin-plate bending element.
//!
//! The classical non-conforming rectangle: transverse displacement is the
//! 12-term polynomial {1, x, y, x², xy, y², x³, x²y, xy², y³, x³y, xy³}
//! with (w, θx, θy) at each corner, θx = ∂w/∂y and θy = −∂w/∂x. The
//! element is formed in generalized coordinates on the unit square and
//! scaled, which keeps the coefficient matrix perfectly conditioned for
//! any cell size.

use nalgebra::{Matrix3, SMatrix, SVector};

pub type Mat12 = SMatrix<f64, 12, 12>;
pub type Vec12 = SVector<f64, 12>;
type Mat3x12 = SMatrix<f64, 3, 12>;

/// Monomial exponents of the deflection basis on the unit square.
const EXPONENTS: [(i32, i32); 12] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (3, 1),
    (1, 3),
];

fn powi(x: f64, p: i32) -> f64 {
    if p < 0 {
        0.0
    } else {
        x.powi(p)
    }
}

fn basis_row(xi: f64, eta: f64) -> Vec12 {
    Vec12::from_fn(|k, _| {
        let (px, py) = EXPONENTS[k];
        powi(xi, px) * powi(eta, py)
    })
}

fn basis_dxi(xi: f64, eta: f64) -> Vec12 {
    Vec12::from_fn(|k, _| {
        let (px, py) = EXPONENTS[k];
        px as f64 * powi(xi, px - 1) * powi(eta, py)
    })
}

fn basis_deta(xi: f64, eta: f64) -> Vec12 {
    Vec12::from_fn(|k, _| {
        let (px, py) = EXPONENTS[k];
        py as f64 * powi(xi, px) * powi(eta, py - 1)
    })
}

/// Rows: [−∂²/∂ξ², −∂²/∂η², −2∂²/∂ξ∂η] of the basis — unit-square
/// curvature operator before physical scaling.
fn curvature_rows(xi: f64, eta: f64) -> Mat3x12 {
    let mut q = Mat3x12::zeros();
    for k in 0..12 {
        let (px, py) = EXPONENTS[k];
        q[(0, k)] = -(px * (px - 1)) as f64 * powi(xi, px - 2) * powi(eta, py);
        q[(1, k)] = -(py * (py - 1)) as f64 * powi(xi, px) * powi(eta, py - 2);
        q[(2, k)] = -2.0 * (px * py) as f64 * powi(xi, px - 1) * powi(eta, py - 1);
    }
    q
}

/// 3-point Gauss rule on [0, 1]; exact through degree 5, enough for the
/// quartic integrands here.
const GAUSS3: [(f64, f64); 3] = [
    (0.112701665379258311, 0.277777777777777778),
    (0.5, 0.444444444444444444),
    (0.887298334620741689, 0.277777777777777778),
];

/// Element DOF order: (w, θx, θy) for the four corners counterclockwise
/// from the local origin. Stiffness units are SI (meters, newtons).
#[derive(Debug, Clone)]
pub struct PlateElement {
    /// Cell size along x, m.
    pub a_m: f64,
    /// Cell size along y, m.
    pub b_m: f64,
    /// Flexural rigidity, N·m.
    pub rigidity: f64,
    pub poisson_ratio: f64,
    stiffness: Mat12,
    /// Maps nodal DOFs to polynomial coefficients.
    coeff_map: Mat12,
    /// Plane-bending constitutive matrix D·[[1,ν,0],[ν,1,0],[0,0,(1−ν)/2]].
    dm: Matrix3<f64>,
}

impl PlateElement {
    pub fn new(a_m: f64, b_m: f64, rigidity: f64, poisson_ratio: f64) -> Self {
        assert!(a_m > 0.0 && b_m > 0.0 && rigidity > 0.0);
        let nu = poisson_ratio;
        let dm = rigidity
            * Matrix3::new(
                1.0, nu, 0.0, //
                nu, 1.0, 0.0, //
                0.0, 0.0, (1.0 - nu) / 2.0,
            );

        // Coefficient matrix on the unit square with scaled DOFs
        // (w, ∂w/∂η, −∂w/∂ξ).
        let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let mut c = Mat12::zeros();
        for (node, &(xi, eta)) in corners.iter().enumerate() {
            c.set_row(3 * node, &basis_row(xi, eta).transpose());
            c.set_row(3 * node + 1, &basis_deta(xi, eta).transpose());
            c.set_row(3 * node + 2, &(-basis_dxi(xi, eta)).transpose());
        }
        let c_inv = c.try_inverse().expect("plate coefficient matrix inverts");

        // Physical DOFs: θx = ∂w/∂y = (1/b)∂w/∂η, θy = −∂w/∂x = −(1/a)∂w/∂ξ,
        // so scaled = diag(1, b, a) · physical per node.
        let mut scale = Mat12::zeros();
        for node in 0..4 {
            scale[(3 * node, 3 * node)] = 1.0;
            scale[(3 * node + 1, 3 * node + 1)] = b_m;
            scale[(3 * node + 2, 3 * node + 2)] = a_m;
        }
        let coeff_map = c_inv * scale;

        // Physical curvatures: κ = diag(1/a², 1/b², 1/(ab)) · unit-square rows.
        let s = Matrix3::from_diagonal(&nalgebra::Vector3::new(
            1.0 / (a_m * a_m),
            1.0 / (b_m * b_m),
            1.0 / (a_m * b_m),
        ));
        let mut k_alpha = Mat12::zeros();
        for &(xi, wx) in &GAUSS3 {
            for &(eta, wy) in &GAUSS3 {
                let q = s * curvature_rows(xi, eta);
                k_alpha += (wx * wy * a_m * b_m) * q.transpose() * dm * q;
            }
        }
        let k = coeff_map.transpose() * k_alpha * coeff_map;
        let stiffness = (k + k.transpose()) * 0.5;

        Self {
            a_m,
            b_m,
            rigidity,
            poisson_ratio,
            stiffness,
            coeff_map,
            dm,
        }
    }

    pub fn stiffness(&self) -> &Mat12 {
        &self.stiffness
    }

    /// Consistent nodal loads for a uniform pressure over the sub-rectangle
    /// [x0, x1] × [y0, y1] in element-local coordinates (meters). The
    /// integral of pressure against the shape functions is evaluated
    /// exactly from monomial antiderivatives.
    pub fn consistent_pressure_load(
        &self,
        pressure_pa: f64,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    ) -> Vec12 {
        let (xi0, xi1) = (x0 / self.a_m, x1 / self.a_m);
        let (eta0, eta1) = (y0 / self.b_m, y1 / self.b_m);
        if xi1 <= xi0 || eta1 <= eta0 {
            return Vec12::zeros();
        }
        let g = Vec12::from_fn(|k, _| {
            let (px, py) = EXPONENTS[k];
            let ix = (xi1.powi(px + 1) - xi0.powi(px + 1)) / (px + 1) as f64;
            let iy = (eta1.powi(py + 1) - eta0.powi(py + 1)) / (py + 1) as f64;
            ix * iy
        });
        self.coeff_map.transpose() * g * (pressure_pa * self.a_m * self.b_m)
    }

    /// Internal bending moments per unit width [Mx, My, Mxy] at local
    /// point (x, y), meters, from the nodal DOF vector.
    pub fn moments_at(&self, dofs: &Vec12, x: f64, y: f64) -> [f64; 3] {
        let s = Matrix3::from_diagonal(&nalgebra::Vector3::new(
            1.0 / (self.a_m * self.a_m),
            1.0 / (self.b_m * self.b_m),
            1.0 / (self.a_m * self.b_m),
        ));
        let kappa = s * curvature_rows(x / self.a_m, y / self.b_m) * self.coeff_map * dofs;
        let m = self.dm * kappa;
        [m[0], m[1], m[2]]
    }
}

/// Spec-facing constructor in panel units: cell size in mm, rigidity in
/// N·m. DOFs act on meters and radians.
pub fn plate_element_stiffness(dx_mm: f64, dy_mm: f64, rigidity: f64, poisson_ratio: f64) -> Mat12 {
    *PlateElement::new(dx_mm / 1000.0, dy_mm / 1000.0, rigidity, poisson_ratio).stiffness()
}
