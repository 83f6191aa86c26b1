//! Dunkl-type operators for odd `k` and the operators built from them: the
//! extended Hamiltonian `𝓗_k`, its angular integral `𝓧_k`, the modified
//! bosons `A_i`, the oscillators `H_i` and their symmetrized product `𝓨_{2k}`.
//!
//! Group elements enter through a realization: grid permutations for the
//! scalar problem, or `4×4` Fock-space matrices for the fermionic one.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::dihedral::{grid_permutation, identity_projector, DihedralElement, IdentityProjector};
use crate::fermion::dihedral_fermionic;
use crate::grid::Grid;
use crate::operator::OperatorMatrix;
use crate::scalar::{strong_operator, ScalarKind};
use crate::{Error, Result};

/// Largest `k` for which the `k!`-term product is assembled.
pub const Y_BUDGET_K: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    /// Elements act by permuting grid angles.
    Permutation,
    /// Elements act on the fermion index only.
    Fermionic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamiltonianForm {
    /// In terms of `D_r` and `D_φ`.
    Dunkl,
    /// Plain radial part and `D_φ²` plus the group-algebra constant.
    Radial,
    /// Plain derivatives with all exchange terms written as potentials.
    NormalOrdered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngularForm {
    /// `-D_φ²`.
    Square,
    Expanded,
}

#[derive(Clone, Debug)]
pub struct DunklOperators {
    grid: Grid,
    k: usize,
    fermions: usize,
    realization: Realization,
    /// `ℛ^i` at index `i`, `ℛ^iℐ` at `2k + i`.
    elements: Vec<OperatorMatrix>,
    pub c: OperatorMatrix,
    pub d_r: OperatorMatrix,
    pub d_phi: OperatorMatrix,
}

impl DunklOperators {
    /// Scalar operators with permutation matrices for the group.
    pub fn new(grid: &Grid) -> Result<Self> {
        Self::build(grid, Realization::Permutation)
    }

    /// Every group element replaced by its Fock-space matrix (`F = 4`).
    pub fn fermionic(grid: &Grid) -> Result<Self> {
        Self::build(grid, Realization::Fermionic)
    }

    pub fn build(grid: &Grid, realization: Realization) -> Result<Self> {
        let k = grid.params().odd_k()?;
        let (ku, fermions) = (k as u32, if realization == Realization::Permutation { 1 } else { 4 });
        let elements = DihedralElement::all(ku)
            .iter()
            .map(|g| match realization {
                Realization::Permutation => grid_permutation(g, grid, 1),
                Realization::Fermionic => Ok(OperatorMatrix::fermion(grid, &dihedral_fermionic(g))),
            })
            .collect::<Result<Vec<_>>>()?;
        let p = *grid.params();
        let refl = |i: usize| &elements[2 * k + (i % (2 * k))];
        let c_terms: Vec<(f64, &OperatorMatrix)> = (0..k).flat_map(|i| [(p.a, refl(1 + 2 * i)), (p.b, refl(2 * i))]).collect();
        let c = OperatorMatrix::linear_combination(&c_terms)?;
        let inv_r = OperatorMatrix::multiplier(grid, fermions, |r, _| 1.0 / r);
        let d_r = OperatorMatrix::d_r(grid, fermions).try_sub(&inv_r.try_mul(&c)?)?;
        let mut d_phi = OperatorMatrix::d_phi(grid, fermions);
        for i in 0..k {
            let shift = i as f64 * PI / k as f64;
            let tan = OperatorMatrix::multiplier(grid, fermions, move |_, phi| (phi + shift).tan());
            let cot = OperatorMatrix::multiplier(grid, fermions, move |_, phi| 1.0 / (phi + shift).tan());
            d_phi = OperatorMatrix::linear_combination(&[
                (1.0, &d_phi),
                (p.a, &tan.try_mul(refl(k + 2 * i))?),
                (-p.b, &cot.try_mul(refl(2 * i))?),
            ])?;
        }
        Ok(Self { grid: grid.clone(), k, fermions, realization, elements, c, d_r, d_phi })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fermions(&self) -> usize {
        self.fermions
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn element(&self, g: &DihedralElement) -> Result<&OperatorMatrix> {
        if g.k as usize != self.k {
            return Err(Error::OrderMismatch(g.k, self.k as u32));
        }
        Ok(&self.elements[g.i as usize + if g.reflected { 2 * self.k } else { 0 }])
    }

    /// `ℛ^i`.
    pub fn rot(&self, i: i64) -> &OperatorMatrix {
        &self.elements[i.rem_euclid(2 * self.k as i64) as usize]
    }

    /// `ℛ^iℐ`.
    pub fn refl(&self, i: i64) -> &OperatorMatrix {
        &self.elements[2 * self.k + i.rem_euclid(2 * self.k as i64) as usize]
    }

    fn mult<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F) -> OperatorMatrix {
        OperatorMatrix::multiplier(&self.grid, self.fermions, f)
    }

    fn one(&self) -> OperatorMatrix {
        OperatorMatrix::identity(&self.grid, self.fermions)
    }

    /// `D_r†` as claimed: `-D_r - (1/r)(1 + 2C)`.
    pub fn d_r_adjoint_formula(&self) -> Result<OperatorMatrix> {
        let inv_r = self.mult(|r, _| 1.0 / r);
        let bracket = self.one().try_add(&self.c.scale(2.0))?;
        OperatorMatrix::linear_combination(&[(-1.0, &self.d_r), (-1.0, &inv_r.try_mul(&bracket)?)])
    }

    /// `-(2/r) C D_φ`, the claimed value of `[D_r, D_φ]`.
    pub fn radial_angular_commutator_formula(&self) -> Result<OperatorMatrix> {
        self.mult(|r, _| -2.0 / r).try_mul(&self.c)?.try_mul(&self.d_phi)
    }

    /// `k(a² + b² + 2abℛ) Σ_i ℛ^{2i}`.
    fn casimir_constant(&self) -> Result<OperatorMatrix> {
        let p = self.grid.params();
        let k = self.k as i64;
        let terms: Vec<(f64, &OperatorMatrix)> = (0..k)
            .flat_map(|i| [(p.a * p.a + p.b * p.b, self.rot(2 * i)), (2.0 * p.a * p.b, self.rot(2 * i + 1))])
            .collect();
        Ok(OperatorMatrix::linear_combination(&terms)?.scale(self.k as f64))
    }

    /// `Σ_i [a sec²(φ+iπ/k)(a - ℛ^{k+2i}ℐ) + b csc²(φ+iπ/k)(b - ℛ^{2i}ℐ)]`.
    fn exchange_potential(&self) -> Result<OperatorMatrix> {
        let p = *self.grid.params();
        let k = self.k;
        let mut acc = OperatorMatrix::zero(&self.grid, self.fermions);
        for i in 0..k {
            let shift = i as f64 * PI / k as f64;
            let sec2 = self.mult(move |_, phi| 1.0 / (phi + shift).cos().powi(2));
            let csc2 = self.mult(move |_, phi| 1.0 / (phi + shift).sin().powi(2));
            let a_part = self.one().scale(p.a).try_sub(self.refl((k + 2 * i) as i64))?;
            let b_part = self.one().scale(p.b).try_sub(self.refl(2 * i as i64))?;
            acc = OperatorMatrix::linear_combination(&[(1.0, &acc), (p.a, &sec2.try_mul(&a_part)?), (p.b, &csc2.try_mul(&b_part)?)])?;
        }
        Ok(acc)
    }

    fn plain_radial(&self) -> Result<OperatorMatrix> {
        let dr = OperatorMatrix::d_r(&self.grid, self.fermions);
        let inv_r = self.mult(|r, _| 1.0 / r);
        dr.try_mul(&dr)?.try_add(&inv_r.try_mul(&dr)?)
    }

    pub fn extended_hamiltonian(&self, form: HamiltonianForm) -> Result<OperatorMatrix> {
        let omega = self.grid.params().omega;
        let inv_r = self.mult(|r, _| 1.0 / r);
        let inv_r2 = self.mult(|r, _| 1.0 / (r * r));
        let trap = self.mult(move |r, _| omega * omega * r * r);
        let dphi2 = self.d_phi.try_mul(&self.d_phi)?;
        match form {
            HamiltonianForm::Dunkl => {
                let bracket = self.one().try_add(&self.c.scale(2.0))?;
                OperatorMatrix::linear_combination(&[
                    (-1.0, &self.d_r.try_mul(&self.d_r)?),
                    (-1.0, &inv_r.try_mul(&bracket)?.try_mul(&self.d_r)?),
                    (-1.0, &inv_r2.try_mul(&dphi2)?),
                    (1.0, &trap),
                ])
            }
            HamiltonianForm::Radial => {
                let angular = dphi2.try_sub(&self.casimir_constant()?)?;
                OperatorMatrix::linear_combination(&[(-1.0, &self.plain_radial()?), (-1.0, &inv_r2.try_mul(&angular)?), (1.0, &trap)])
            }
            HamiltonianForm::NormalOrdered => {
                let dphi = OperatorMatrix::d_phi(&self.grid, self.fermions);
                let angular = self.exchange_potential()?.try_sub(&dphi.try_mul(&dphi)?)?;
                OperatorMatrix::linear_combination(&[(-1.0, &self.plain_radial()?), (1.0, &inv_r2.try_mul(&angular)?), (1.0, &trap)])
            }
        }
    }

    pub fn extended_angular(&self, form: AngularForm) -> Result<OperatorMatrix> {
        match form {
            AngularForm::Square => Ok(self.d_phi.try_mul(&self.d_phi)?.scale(-1.0)),
            AngularForm::Expanded => {
                let dphi = OperatorMatrix::d_phi(&self.grid, self.fermions);
                OperatorMatrix::linear_combination(&[
                    (-1.0, &dphi.try_mul(&dphi)?),
                    (1.0, &self.exchange_potential()?),
                    (-1.0, &self.casimir_constant()?),
                ])
            }
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.k {
            return Err(Error::Domain(format!("boson index {i} out of range 0..{}", self.k)));
        }
        Ok(())
    }

    /// `A_i` or `A_i†`.
    pub fn boson(&self, i: usize, dagger: bool) -> Result<OperatorMatrix> {
        self.check_index(i)?;
        let omega = self.grid.params().omega;
        let shift = i as f64 * PI / self.k as f64;
        let sg = if dagger { -1.0 } else { 1.0 };
        let norm = 1.0 / (2.0 * omega).sqrt();
        let cos = self.mult(move |_, phi| norm * (phi + shift).cos());
        let sin_r = self.mult(move |r, phi| norm * (phi + shift).sin() / r);
        let radial = OperatorMatrix::linear_combination(&[(1.0, &self.mult(move |r, _| omega * r)), (sg, &self.d_r)])?;
        OperatorMatrix::linear_combination(&[(1.0, &cos.try_mul(&radial)?), (-sg, &sin_r.try_mul(&self.d_phi)?)])
    }

    /// Right side of `[A_i, A_j†]`.
    pub fn boson_commutator_formula(&self, i: usize, j: usize) -> Result<OperatorMatrix> {
        self.check_index(i)?;
        self.check_index(j)?;
        let p = self.grid.params();
        let k = self.k as i64;
        let ang = |n: i64| n as f64 * PI / k as f64;
        let (i, j) = (i as i64, j as i64);
        let one = self.one();
        let mut terms: Vec<(f64, &OperatorMatrix)> = vec![(ang(j - i).cos(), &one)];
        for l in 0..k {
            terms.push((2.0 * p.a * ang(l - i).cos() * ang(l - j).cos(), self.refl(k + 2 * l)));
            terms.push((2.0 * p.b * ang(l - i).sin() * ang(l - j).sin(), self.refl(2 * l)));
        }
        OperatorMatrix::linear_combination(&terms)
    }

    /// `H_i = ½{A_i†, A_i}`.
    pub fn component_hamiltonian(&self, i: usize) -> Result<OperatorMatrix> {
        let (a, ad) = (self.boson(i, false)?, self.boson(i, true)?);
        Ok(ad.anticommutator(&a)?.scale(0.5))
    }

    /// `(2ω)^k Σ_p H_{p(0)} ⋯ H_{p(k-1)}` over all `k!` orderings.
    pub fn symmetrized_y(&self) -> Result<OperatorMatrix> {
        if self.k > Y_BUDGET_K {
            return Err(Error::Budget(format!("k! products for k = {} exceed the k <= {Y_BUDGET_K} budget", self.k)));
        }
        let hs = (0..self.k).map(|i| self.component_hamiltonian(i)).collect::<Result<Vec<_>>>()?;
        let omega = self.grid.params().omega;
        OperatorMatrix::word_sum(&hs, permutations(self.k), (2.0 * omega).powi(self.k as i32))
    }
}

/// All orderings of `0..n` in lexicographic (rank) order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Scalar operators restricted to the identity-representation subspace:
/// dense matrices on the orthonormal orbit basis, symmetric gauge.
#[derive(Clone, Debug)]
pub struct ProjectedIntegrals {
    pub projector: IdentityProjector,
    pub h: DMatrix<f64>,
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
}

impl ProjectedIntegrals {
    /// `H_k` and `X_k` from the scalar strong forms; `Y_{2k}` from the
    /// projected `𝓨_{2k}`.
    pub fn new(ops: &DunklOperators) -> Result<Self> {
        if ops.realization != Realization::Permutation {
            return Err(Error::Domain("projection needs the permutation realization".into()));
        }
        let grid = ops.grid();
        let projector = identity_projector(grid)?;
        let h = projector.restrict(&strong_operator(&ScalarKind::Hk, grid)?)?;
        let x = projector.restrict(&strong_operator(&ScalarKind::Xk, grid)?)?;
        let y = projector.restrict(&ops.symmetrized_y()?)?;
        Ok(Self { projector, h, x, y })
    }

    /// Coordinates of a (nodal) grid function in the orbit basis.
    pub fn coordinates(&self, v: &[f64]) -> DVector<f64> {
        let grid = self.projector.projector.grid();
        let sym = DVector::from_iterator(v.len(), v.iter().zip(&grid.sqrt_weights).map(|(x, w)| x * w));
        self.projector.symmetric_basis().transpose() * sym
    }
}

/// `‖[A, B]c‖`, `‖A‖_p ‖B‖_p` and `max(‖ABc‖, ‖BAc‖)` over coefficient
/// probes (each of unit norm), worst case.
pub fn dense_bracket_stats(a: &DMatrix<f64>, b: &DMatrix<f64>, probes: &[DVector<f64>]) -> BracketStats {
    let amp = |m: &DMatrix<f64>| probes.iter().map(|c| (m * c).norm() / c.norm()).fold(0.0, f64::max);
    let (mut residual, mut relative) = (0.0f64, 0.0f64);
    for c in probes {
        let (ab, ba) = (a * (b * c), b * (a * c));
        let diff = (&ab - &ba).norm() / c.norm();
        residual = residual.max(diff);
        let products = ab.norm().max(ba.norm()) / c.norm();
        if products > 0.0 {
            relative = relative.max(diff / products);
        }
    }
    BracketStats { residual, scale: amp(a) * amp(b), product_relative: relative }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketStats {
    pub residual: f64,
    pub scale: f64,
    /// Worst `‖[A,B]c‖ / max(‖ABc‖, ‖BAc‖)`.
    pub product_relative: f64,
}
