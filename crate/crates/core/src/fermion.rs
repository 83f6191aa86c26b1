//! Two fermion modes in the Fock basis `|00>, |10>, |01>, |11>`.
//!
//! Ordering convention: `b_x† |00> = |10>`, `b_y† |00> = |01>` and
//! `b_y† |10> = -|11>`, so `b_x†b_y† |00> = -|11>` and all anticommutators are
//! the canonical ones.

use nalgebra::Matrix4;

use crate::dihedral::DihedralElement;

#[derive(Clone, Debug, PartialEq)]
pub struct FermionAlgebra {
    pub bx: Matrix4<f64>,
    pub by: Matrix4<f64>,
    pub bx_dag: Matrix4<f64>,
    pub by_dag: Matrix4<f64>,
}

impl Default for FermionAlgebra {
    fn default() -> Self {
        Self::new()
    }
}

impl FermionAlgebra {
    pub fn new() -> Self {
        let mut bx = Matrix4::zeros();
        bx[(0, 1)] = 1.0;
        bx[(2, 3)] = 1.0;
        let mut by = Matrix4::zeros();
        by[(0, 2)] = 1.0;
        by[(1, 3)] = -1.0;
        Self { bx_dag: bx.transpose(), by_dag: by.transpose(), bx, by }
    }

    pub fn nx(&self) -> Matrix4<f64> {
        self.bx_dag * self.bx
    }

    pub fn ny(&self) -> Matrix4<f64> {
        self.by_dag * self.by
    }

    /// Rotated modes `(b̄_x, b̄_y)` at angle `φ` (annihilators).
    pub fn rotated(&self, phi: f64) -> (Matrix4<f64>, Matrix4<f64>) {
        let (s, c) = phi.sin_cos();
        (self.bx * c + self.by * s, self.by * c - self.bx * s)
    }

    /// Fock number operator `Γ`-free part: `b_x†b_x + b_y†b_y`.
    pub fn number(&self) -> Matrix4<f64> {
        self.nx() + self.ny()
    }
}

/// Fermionic realization of a group element: it acts on Fock space only.
///
/// `ℛ^i ↦ 1 + (cos θ − 1)(n_x + n_y) + sin θ (b_x†b_y − b_y†b_x) + 2(1 − cos θ) n_x n_y`,
/// `ℛ^iℐ ↦ 1 + (cos θ − 1) n_x − (cos θ + 1) n_y − sin θ (b_x†b_y + b_y†b_x)`,
/// with `θ = iπ/k`.
pub fn dihedral_fermionic(g: &DihedralElement) -> Matrix4<f64> {
    let f = FermionAlgebra::new();
    let theta = g.i as f64 * std::f64::consts::PI / g.k as f64;
    let (s, c) = theta.sin_cos();
    let (nx, ny) = (f.nx(), f.ny());
    let hop = f.bx_dag * f.by;
    let hop_back = f.by_dag * f.bx;
    let one = Matrix4::identity();
    if g.reflected {
        one + nx * (c - 1.0) - ny * (c + 1.0) - (hop + hop_back) * s
    } else {
        one + (nx + ny) * (c - 1.0) + (hop - hop_back) * s + nx * ny * (2.0 * (1.0 - c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix4<f64>, b: &Matrix4<f64>) -> bool {
        (a - b).amax() < 1e-13
    }

    #[test]
    fn canonical_anticommutators() {
        let f = FermionAlgebra::new();
        let one = Matrix4::identity();
        let anti = |x: &Matrix4<f64>, y: &Matrix4<f64>| x * y + y * x;
        assert!(close(&anti(&f.bx, &f.bx_dag), &one));
        assert!(close(&anti(&f.by, &f.by_dag), &one));
        assert!(close(&anti(&f.bx, &f.by_dag), &Matrix4::zeros()));
        assert!(close(&anti(&f.bx, &f.by), &Matrix4::zeros()));
        assert!(close(&(f.bx * f.bx), &Matrix4::zeros()));
        let (rx, ry) = f.rotated(0.37);
        assert!(close(&anti(&rx, &rx.transpose()), &one));
        assert!(close(&anti(&rx, &ry.transpose()), &Matrix4::zeros()));
    }

    #[test]
    fn realization_is_a_homomorphism() {
        for k in [1u32, 3, 5] {
            let all = DihedralElement::all(k);
            for g in &all {
                let rg = dihedral_fermionic(g);
                assert!(close(&(rg * rg.transpose()), &Matrix4::identity()), "{g} not orthogonal");
                for h in &all {
                    let gh = g.multiply(h).unwrap();
                    assert!(close(&(rg * dihedral_fermionic(h)), &dihedral_fermionic(&gh)), "k={k}: {g}·{h}");
                }
            }
        }
    }

    #[test]
    fn generators_for_k_one() {
        let i = dihedral_fermionic(&DihedralElement::reflection(1, 0));
        assert!(close(&i, &Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, -1.0))));
        let r = dihedral_fermionic(&DihedralElement::rotation(1, 1));
        assert!(close(&r, &Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, 1.0))));
    }
}
