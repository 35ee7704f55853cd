//! Perimeter frame stiffener: Euler-Bernoulli bending plus uniform
//! torsion between two adjacent boundary nodes.
//!
//! Local DOF order is (w, φ, ψ) per node, where φ = dw/ds is the bending
//! slope along the member and ψ the twist about the member axis. The
//! global block maps these onto the plate's (w, θx, θy): along-x edges
//! bend through θy (φ = −θy) and twist through θx; along-y edges bend
//! through θx and twist through θy.

use nalgebra::SMatrix;

use crate::mesh::EdgeDirection;
use crate::model::FrameSection;

pub type Mat6 = SMatrix<f64, 6, 6>;

/// Local stiffness block of one frame segment, SI units.
pub fn beam_element_stiffness(length_m: f64, e_pa: f64, section: &FrameSection, g_pa: f64) -> Mat6 {
    assert!(length_m > 0.0);
    let l = length_m;
    let ei = e_pa * section.bending_inertia_m4();
    let gj = g_pa * section.torsion_constant_m4();

    let mut k = Mat6::zeros();
    // bending on (w1, φ1, w2, φ2) = local indices (0, 1, 3, 4)
    let kb = ei / (l * l * l);
    let bend = [
        [12.0, 6.0 * l, -12.0, 6.0 * l],
        [6.0 * l, 4.0 * l * l, -6.0 * l, 2.0 * l * l],
        [-12.0, -6.0 * l, 12.0, -6.0 * l],
        [6.0 * l, 2.0 * l * l, -6.0 * l, 4.0 * l * l],
    ];
    let idx = [0, 1, 3, 4];
    for r in 0..4 {
        for c in 0..4 {
            k[(idx[r], idx[c])] = kb * bend[r][c];
        }
    }
    // torsion on (ψ1, ψ2) = local indices (2, 5)
    let kt = gj / l;
    k[(2, 2)] = kt;
    k[(2, 5)] = -kt;
    k[(5, 2)] = -kt;
    k[(5, 5)] = kt;
    k
}

/// Maps the local (w, φ, ψ) block onto global (w, θx, θy) DOFs for an
/// edge of the given direction.
pub fn beam_block_global(local: &Mat6, direction: EdgeDirection) -> Mat6 {
    // per-node rows: local = T · global
    let t3: [[f64; 3]; 3] = match direction {
        // φ = dw/dx = −θy, ψ = θx
        EdgeDirection::AlongX => [[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
        // φ = dw/dy = θx, ψ = θy
        EdgeDirection::AlongY => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };
    let mut t = Mat6::zeros();
    for n in 0..2 {
        for r in 0..3 {
            for c in 0..3 {
                t[(3 * n + r, 3 * n + c)] = t3[r][c];
            }
        }
    }
    t.transpose() * local * t
}

/// Consistent nodal loads of a uniform line load (N/m, positive with w)
/// on one segment, local DOF order.
pub fn beam_line_load(length_m: f64, q_n_per_m: f64) -> SMatrix<f64, 6, 1> {
    let l = length_m;
    let q = q_n_per_m;
    SMatrix::<f64, 6, 1>::from_column_slice(&[
        q * l / 2.0,
        q * l * l / 12.0,
        0.0,
        q * l / 2.0,
        -q * l * l / 12.0,
        0.0,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};

    fn section() -> FrameSection {
        FrameSection::default()
    }

    #[test]
    fn local_block_is_symmetric() {
        let k = beam_element_stiffness(0.0125, 70.0e9, &section(), 26.0e9);
        let asym: f64 = (k - k.transpose()).iter().map(|v| v.abs()).sum();
        let scale: f64 = k.iter().map(|v| v.abs()).sum();
        assert!(asym / scale < 1.0e-13);
    }

    #[test]
    fn rigid_modes_in_bending_subspace() {
        let l = 0.2;
        let k = beam_element_stiffness(l, 70.0e9, &section(), 26.0e9);
        // uniform translation
        let t = SMatrix::<f64, 6, 1>::from_column_slice(&[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        // straight-line rotation: w2 = w1 + l, slopes 1
        let r = SMatrix::<f64, 6, 1>::from_column_slice(&[0.0, 1.0, 0.0, l, 1.0, 0.0]);
        let scale: f64 = k.iter().map(|v| v.abs()).sum();
        assert!((k * t).norm() / scale < 1.0e-13);
        assert!((k * r).norm() / (scale * r.norm()) < 1.0e-13);
    }

    /// Assemble a 1D cantilever chain of `n` equal segments, clamp the
    /// first node, load the tip, and return the tip deflection.
    fn cantilever_tip_deflection(n: usize, total_len: f64, e: f64, tip_force: f64) -> f64 {
        let sec = section();
        let l = total_len / n as f64;
        let k_el = beam_element_stiffness(l, e, &sec, 26.0e9);
        let dofs = 3 * (n + 1);
        let mut k = DMatrix::<f64>::zeros(dofs, dofs);
        for el in 0..n {
            for r in 0..6 {
                for c in 0..6 {
                    k[(3 * el + r, 3 * el + c)] += k_el[(r, c)];
                }
            }
        }
        let mut f = DVector::<f64>::zeros(dofs);
        f[3 * n] = tip_force;
        // clamp node 0 (w, φ) and pin every twist DOF (torsion is
        // decoupled here and otherwise leaves the chain singular)
        let mut fixed = vec![0usize, 1];
        fixed.extend((0..=n).map(|i| 3 * i + 2));
        let free: Vec<usize> = (0..dofs).filter(|d| !fixed.contains(d)).collect();
        let kr = DMatrix::from_fn(free.len(), free.len(), |r, c| k[(free[r], free[c])]);
        let fr = DVector::from_fn(free.len(), |r, _| f[free[r]]);
        let u = kr.cholesky().expect("cantilever system is SPD").solve(&fr);
        let tip_index = free.iter().position(|&d| d == 3 * n).unwrap();
        u[tip_index]
    }

    #[test]
    fn cantilever_matches_closed_form() {
        let (e, l, p) = (70.0e9, 1.2, 37.0);
        let expected = p * l * l * l / (3.0 * e * section().bending_inertia_m4());
        let tip = cantilever_tip_deflection(10, l, e, p);
        assert_relative_eq!(tip, expected, max_relative = 1.0e-9);
    }

    #[test]
    fn refinement_does_not_change_cubic_solution() {
        let a = cantilever_tip_deflection(5, 0.8, 70.0e9, 11.0);
        let b = cantilever_tip_deflection(10, 0.8, 70.0e9, 11.0);
        assert_relative_eq!(a, b, max_relative = 1.0e-10);
    }

    #[test]
    fn zero_force_gives_zero_displacements() {
        let tip = cantilever_tip_deflection(4, 0.5, 70.0e9, 0.0);
        assert_eq!(tip, 0.0);
    }

    #[test]
    fn global_block_along_x_flips_bending_sign() {
        let l = 0.1;
        let local = beam_element_stiffness(l, 70.0e9, &section(), 26.0e9);
        let gx = beam_block_global(&local, EdgeDirection::AlongX);
        // w–slope coupling moves to the θy column with opposite sign
        assert_relative_eq!(gx[(0, 2)], -local[(0, 1)], max_relative = 1.0e-14);
        // torsion lands on θx
        assert_relative_eq!(gx[(1, 1)], local[(2, 2)], max_relative = 1.0e-14);
        let gy = beam_block_global(&local, EdgeDirection::AlongY);
        assert_relative_eq!(gy[(0, 1)], local[(0, 1)], max_relative = 1.0e-14);
        assert_relative_eq!(gy[(2, 2)], local[(2, 2)], max_relative = 1.0e-14);
    }
}
