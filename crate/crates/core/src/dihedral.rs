//! The dihedral group of order `4k`, generated by the rotation `ℛ` through
//! `π/k` and the reflection `ℐ: φ → -φ`, and its action on the grid.
//!
//! Conventions: `(ℛf)(φ) = f(φ + π/k)`, `(ℐf)(φ) = f(-φ)`, and `ℛ^iℐ` is the
//! composite operator, so `(ℛ^iℐ f)(φ) = f(-φ - iπ/k)`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::operator::{Gauge, OperatorMatrix};
use crate::{Error, Result};

/// `ℛ^i` or `ℛ^iℐ` with `i` taken mod `2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralElement {
    pub k: u32,
    pub i: u32,
    pub reflected: bool,
}

impl DihedralElement {
    pub fn new(k: u32, i: i64, reflected: bool) -> Self {
        assert!(k >= 1, "dihedral order parameter must be positive");
        Self { k, i: i.rem_euclid(2 * k as i64) as u32, reflected }
    }

    pub fn identity(k: u32) -> Self {
        Self::new(k, 0, false)
    }

    pub fn rotation(k: u32, i: i64) -> Self {
        Self::new(k, i, false)
    }

    /// `ℛ^iℐ`.
    pub fn reflection(k: u32, i: i64) -> Self {
        Self::new(k, i, true)
    }

    /// All `4k` elements: rotations first, then reflections.
    pub fn all(k: u32) -> Vec<Self> {
        let n = 2 * k as i64;
        (0..n).map(|i| Self::rotation(k, i)).chain((0..n).map(|i| Self::reflection(k, i))).collect()
    }

    pub fn order(&self) -> u32 {
        4 * self.k
    }

    /// Group product `self · other`, from `ℐℛ = ℛ^{2k-1}ℐ`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::OrderMismatch(self.k, other.k));
        }
        let j = if self.reflected { -(other.i as i64) } else { other.i as i64 };
        Ok(Self::new(self.k, self.i as i64 + j, self.reflected ^ other.reflected))
    }

    pub fn inverse(&self) -> Self {
        if self.reflected {
            *self
        } else {
            Self::rotation(self.k, -(self.i as i64))
        }
    }

    /// Index map on the offset ring: `(g f)(φ_m) = f(φ_{perm[m]})`.
    pub fn angular_permutation(&self, m: usize) -> Result<Vec<usize>> {
        let k = self.k as usize;
        if m == 0 || !m.is_multiple_of(8 * k) {
            return Err(Error::Grid(format!("M = {m} is not a multiple of 8k = {}", 8 * k)));
        }
        let shift = self.i as usize * m / (2 * k);
        Ok((0..m)
            .map(|idx| if self.reflected { (2 * m - 1 - idx - shift) % m } else { (idx + shift) % m })
            .collect())
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.i, self.reflected) {
            (0, false) => write!(f, "1"),
            (0, true) => write!(f, "I"),
            (i, false) => write!(f, "R^{i}"),
            (i, true) => write!(f, "R^{i}I"),
        }
    }
}

fn grid_k(grid: &Grid) -> u32 {
    grid.k as u32
}

/// Permutation operator of `g` on the grid (identity on rings and Fock space).
pub fn grid_permutation(g: &DihedralElement, grid: &Grid, fermions: usize) -> Result<OperatorMatrix> {
    if g.k != grid_k(grid) {
        return Err(Error::OrderMismatch(g.k, grid_k(grid)));
    }
    OperatorMatrix::permutation(grid, fermions, g.angular_permutation(grid.m())?)
}

/// `P = (1/4k) Σ_g g` together with an orthonormal basis of its range.
#[derive(Clone, Debug)]
pub struct IdentityProjector {
    pub projector: OperatorMatrix,
    /// Columns orthonormal for the quadrature inner product (nodal gauge):
    /// normalized orbit indicators, one per ring and group orbit.
    pub basis: DMatrix<f64>,
}

impl IdentityProjector {
    /// Basis in the symmetric gauge, orthonormal in the Euclidean sense.
    pub fn symmetric_basis(&self) -> DMatrix<f64> {
        let w = &self.projector.grid().sqrt_weights;
        DMatrix::from_fn(self.basis.nrows(), self.basis.ncols(), |i, j| w[i] * self.basis[(i, j)])
    }

    /// `Bᵀ A B` with `A` in the symmetric gauge: the matrix of `A` on the
    /// invariant subspace.
    pub fn restrict(&self, op: &OperatorMatrix) -> Result<DMatrix<f64>> {
        op.in_gauge(Gauge::Symmetric).restrict(&self.symmetric_basis())
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

pub fn identity_projector(grid: &Grid) -> Result<IdentityProjector> {
    let k = grid_k(grid);
    let elements = DihedralElement::all(k);
    let perms = elements.iter().map(|g| grid_permutation(g, grid, 1)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<(f64, &OperatorMatrix)> = perms.iter().map(|p| (1.0 / elements.len() as f64, p)).collect();
    let projector = OperatorMatrix::linear_combination(&refs)?;

    // orbits of the (free) action on one ring
    let m = grid.m();
    let maps: Vec<Vec<usize>> = elements.iter().map(|g| g.angular_permutation(m)).collect::<Result<_>>()?;
    let mut orbit_of = vec![usize::MAX; m];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..m {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = maps.iter().map(|p| p[start]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            orbit_of[x] = orbits.len();
        }
        orbits.push(orbit);
    }
    let mut basis = DMatrix::zeros(grid.nodes(), grid.nr() * orbits.len());
    for j in 0..grid.nr() {
        for (o, orbit) in orbits.iter().enumerate() {
            let col = j * orbits.len() + o;
            let mass: f64 = orbit.iter().map(|&x| grid.weights[j * m + x]).sum();
            for &x in orbit {
                basis[(j * m + x, col)] = 1.0 / mass.sqrt();
            }
        }
    }
    Ok(IdentityProjector { projector, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ModelParams;
    use crate::grid::{build_grid, inner_product, GridSpec};

    fn grid(k: u32, m: usize, nr: usize) -> Grid {
        build_grid(GridSpec::new(m, nr, ModelParams::new(1.0, 2.0, 2.0, k as f64).unwrap())).unwrap()
    }

    #[test]
    fn defining_relations() {
        for k in 1..8u32 {
            let r = DihedralElement::rotation(k, 1);
            let i = DihedralElement::reflection(k, 0);
            let e = DihedralElement::identity(k);
            assert_eq!(r.multiply(&DihedralElement::rotation(k, 2 * k as i64 - 1)).unwrap(), e);
            assert_eq!(i.multiply(&i).unwrap(), e);
            assert_eq!(i.multiply(&r).unwrap(), DihedralElement::reflection(k, 2 * k as i64 - 1));
        }
        let a = DihedralElement::identity(3);
        assert_eq!(a.multiply(&DihedralElement::identity(5)), Err(Error::OrderMismatch(3, 5)));
    }

    #[test]
    fn group_axioms() {
        for k in [1u32, 2, 3, 5] {
            let all = DihedralElement::all(k);
            assert_eq!(all.len(), 4 * k as usize);
            for g in &all {
                assert_eq!(g.multiply(&g.inverse()).unwrap(), DihedralElement::identity(k));
                for h in &all {
                    for l in &all {
                        let left = g.multiply(h).unwrap().multiply(l).unwrap();
                        let right = g.multiply(&h.multiply(l).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_acts_by_pi_over_k() {
        let g = grid(3, 24, 2);
        let f = |phi: f64| (phi + 0.3).sin() + (2.0 * phi).cos().powi(3);
        let v: Vec<f64> = g.phi.iter().map(|&p| f(p)).collect();
        for (gel, want) in [
            (DihedralElement::rotation(3, 1), Box::new(|p: f64| f(p + std::f64::consts::PI / 3.0)) as Box<dyn Fn(f64) -> f64>),
            (DihedralElement::reflection(3, 0), Box::new(|p: f64| f(-p))),
            (DihedralElement::reflection(3, 2), Box::new(|p: f64| f(-p - 2.0 * std::f64::consts::PI / 3.0))),
        ] {
            let perm = gel.angular_permutation(24).unwrap();
            for (m, &q) in perm.iter().enumerate() {
                assert!((v[q] - want(g.phi[m])).abs() < 1e-12, "{gel}");
            }
        }
    }

    #[test]
    fn permutations_form_a_homomorphism() {
        for k in [1u32, 3, 5] {
            let m = 8 * k as usize * 2;
            let all = DihedralElement::all(k);
            for g in &all {
                for h in &all {
                    let (pg, ph) = (g.angular_permutation(m).unwrap(), h.angular_permutation(m).unwrap());
                    let composed: Vec<usize> = pg.iter().map(|&x| ph[x]).collect();
                    assert_eq!(composed, g.multiply(h).unwrap().angular_permutation(m).unwrap());
                }
            }
        }
    }

    #[test]
    fn projector_is_idempotent_with_orthonormal_range() {
        let g = grid(3, 48, 4);
        let p = identity_projector(&g).unwrap();
        assert_eq!(p.dim(), 4 * 48 / 12);
        let d = p.projector.to_dense();
        assert!((&d * &d - &d).amax() < 1e-14);
        let b = p.symmetric_basis();
        let gram = b.transpose() * &b;
        assert!((gram - DMatrix::identity(p.dim(), p.dim())).amax() < 1e-13);
        let sym = g.sample(|r, phi| r * r * (6.0 * phi).cos() + (-r).exp() * (12.0 * phi).cos());
        let proj = p.projector.apply(&sym).unwrap();
        assert!(sym.iter().zip(&proj).all(|(a, b)| (a - b).abs() < 1e-13 * a.abs().max(1.0)));
        let col: Vec<f64> = p.basis.column(3).iter().copied().collect();
        assert!((inner_product(&col, &col, &g).unwrap() - 1.0).abs() < 1e-13);
    }
}
