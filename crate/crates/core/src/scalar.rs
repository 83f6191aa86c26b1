//! Scalar operators of the planar TTW problem and the numeric spectrum.
//!
//! `H_k` and `X_k` come in two discretizations. The strong form applies the
//! differential expression literally and is what probe residuals use. The
//! weak form `D_r†D_r + D_φ†(1/r²)D_φ + V/r² + ω²r²` (adjoints for the
//! quadrature inner product) is exactly symmetric in the symmetric gauge and
//! agrees with the strong form on every resolved function that vanishes at
//! the origin, so it is the one handed to the eigensolver.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dihedral::identity_projector;
use crate::grid::Grid;
use crate::numerics::symmetric_eigen;
use crate::operator::{Gauge, OperatorMatrix};
use crate::{Error, Result};

pub type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ScalarKind {
    Mult(Field),
    DR,
    DPhi,
    Hk,
    Xk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sector {
    Full,
    IdentityRep,
}

/// Checked `sec² kφ` and `csc² kφ`.
pub fn sec2_csc2(k: f64, phi: f64) -> Result<(f64, f64)> {
    let (s, c) = (k * phi).sin_cos();
    if c.abs() < 1e-12 || s.abs() < 1e-12 {
        return Err(Error::Pole(phi));
    }
    Ok((1.0 / (c * c), 1.0 / (s * s)))
}

/// Angular potential `k²[a(a-1) sec² kφ + b(b-1) csc² kφ]` on the ring.
pub fn angular_potential(grid: &Grid) -> Result<Vec<f64>> {
    let p = grid.params();
    grid.phi
        .iter()
        .map(|&phi| {
            let (sec2, csc2) = sec2_csc2(p.k, phi)?;
            Ok(p.k * p.k * (p.a * (p.a - 1.0) * sec2 + p.b * (p.b - 1.0) * csc2))
        })
        .collect()
}

fn per_node(grid: &Grid, ring: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    (0..grid.nodes()).map(|p| f(grid.r[p / grid.m()], ring[p % grid.m()])).collect()
}

/// Nodal-gauge operator applying the differential expression directly.
pub fn strong_operator(kind: &ScalarKind, grid: &Grid) -> Result<OperatorMatrix> {
    let p = *grid.params();
    Ok(match kind {
        ScalarKind::Mult(f) => OperatorMatrix::multiplier(grid, 1, |r, phi| f(r, phi)),
        ScalarKind::DR => OperatorMatrix::d_r(grid, 1),
        ScalarKind::DPhi => OperatorMatrix::d_phi(grid, 1),
        ScalarKind::Hk => {
            let v = angular_potential(grid)?;
            let dr = OperatorMatrix::d_r(grid, 1);
            let dphi = OperatorMatrix::d_phi(grid, 1);
            let inv_r = OperatorMatrix::multiplier(grid, 1, |r, _| 1.0 / r);
            let inv_r2 = OperatorMatrix::multiplier(grid, 1, |r, _| 1.0 / (r * r));
            let pot = OperatorMatrix::diag(grid, 1, per_node(grid, &v, |r, v| v / (r * r) + p.omega * p.omega * r * r))?;
            let radial = &(&dr * &dr) + &(&inv_r * &dr);
            &(&pot - &radial) - &(&inv_r2 * &(&dphi * &dphi))
        }
        ScalarKind::Xk => {
            let v = angular_potential(grid)?;
            let dphi = OperatorMatrix::d_phi(grid, 1);
            let pot = OperatorMatrix::diag(grid, 1, per_node(grid, &v, |_, v| v))?;
            &pot - &(&dphi * &dphi)
        }
    })
}

/// Weak-form `H_k` or `X_k`; other kinds fall back to the strong form.
/// Nodal gauge.
pub fn weak_operator(kind: &ScalarKind, grid: &Grid) -> Result<OperatorMatrix> {
    let p = *grid.params();
    match kind {
        ScalarKind::Hk => {
            let v = angular_potential(grid)?;
            let dr = OperatorMatrix::d_r(grid, 1);
            let dphi = OperatorMatrix::d_phi(grid, 1);
            let inv_r2 = OperatorMatrix::multiplier(grid, 1, |r, _| 1.0 / (r * r));
            let pot = OperatorMatrix::diag(grid, 1, per_node(grid, &v, |r, v| v / (r * r) + p.omega * p.omega * r * r))?;
            Ok(&(&(&dr.adjoint() * &dr) + &(&dphi.adjoint() * &(&inv_r2 * &dphi))) + &pot)
        }
        ScalarKind::Xk => {
            let v = angular_potential(grid)?;
            let dphi = OperatorMatrix::d_phi(grid, 1);
            let pot = OperatorMatrix::diag(grid, 1, per_node(grid, &v, |_, v| v))?;
            Ok(&(&dphi.adjoint() * &dphi) + &pot)
        }
        _ => strong_operator(kind, grid),
    }
}

/// Operator of the requested kind in the symmetric gauge (weak form for
/// `H_k` and `X_k`).
pub fn assemble_scalar(kind: &ScalarKind, grid: &Grid) -> Result<OperatorMatrix> {
    Ok(weak_operator(kind, grid)?.in_gauge(Gauge::Symmetric))
}

/// Lowest `count` eigenvalues of a symmetric-gauge operator on a sector.
pub fn sector_spectrum(op: &OperatorMatrix, count: usize, sector: Sector) -> Result<Vec<f64>> {
    let op = op.in_gauge(Gauge::Symmetric);
    let matrix = match sector {
        Sector::Full => op.to_dense(),
        Sector::IdentityRep => {
            if op.fermions() != 1 {
                return Err(Error::Domain("identity-sector restriction needs a scalar operator".into()));
            }
            identity_projector(op.grid())?.restrict(&op)?
        }
    };
    if count > matrix.nrows() {
        return Err(Error::Budget(format!("requested {count} eigenvalues from a sector of dimension {}", matrix.nrows())));
    }
    // restriction and weak assembly are symmetric to round-off only
    let sym = (&matrix + matrix.transpose()) * 0.5;
    let eig = symmetric_eigen(&sym)?;
    Ok(eig.values.iter().take(count).copied().collect())
}

/// Lowest `count` eigenvalues of `H_k` on the given sector.
pub fn numeric_spectrum(grid: &Grid, count: usize, sector: Sector) -> Result<Vec<f64>> {
    grid.params().validate()?;
    sector_spectrum(&assemble_scalar(&ScalarKind::Hk, grid)?, count, sector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{angular_eigenvalue, energy, ModelParams, QuantumNumbers, WavefunctionSpec};
    use crate::grid::{build_grid, norm, GridSpec};
    use crate::numerics::symmetry_defect;

    fn grid(m: usize, nr: usize, omega: f64) -> Grid {
        build_grid(GridSpec::new(m, nr, ModelParams::new(omega, 2.0, 2.0, 3.0).unwrap())).unwrap()
    }

    fn rel_residual(op: &OperatorMatrix, f: &[f64], lambda: f64, g: &Grid) -> f64 {
        let hf = op.apply(f).unwrap();
        let diff: Vec<f64> = hf.iter().zip(f).map(|(a, b)| a - lambda * b).collect();
        norm(&diff, g).unwrap() / (lambda.abs() * norm(f, g).unwrap())
    }

    #[test]
    fn inverse_radius_multiplier() {
        let g = grid(24, 8, 1.0);
        let op = strong_operator(&ScalarKind::Mult(Arc::new(|r, _| 1.0 / r)), &g).unwrap();
        let v = op.apply(&g.sample(|r, _| r)).unwrap();
        assert!(v.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn eigenfunctions_in_both_forms() {
        let g = grid(48, 32, 1.0);
        let p = *g.params();
        for qn in [QuantumNumbers::new(0, 0), QuantumNumbers::new(2, 1)] {
            let s = WavefunctionSpec::normalized(p, qn).unwrap();
            let f = g.sample(|r, phi| s.eval_extended(r, phi));
            let e = energy(qn, &p);
            for op in [strong_operator(&ScalarKind::Hk, &g).unwrap(), weak_operator(&ScalarKind::Hk, &g).unwrap()] {
                let res = rel_residual(&op, &f, e, &g);
                assert!(res < 1e-8, "{qn:?}: {res}");
            }
        }
    }

    #[test]
    fn angular_eigenvalue_of_x() {
        let g = grid(48, 4, 1.0);
        let p = *g.params();
        let s = WavefunctionSpec::unnormalized(p, QuantumNumbers::new(0, 1));
        let f = g.sample(|_, phi| s.angular(phi));
        let res = rel_residual(&strong_operator(&ScalarKind::Xk, &g).unwrap(), &f, angular_eigenvalue(1, &p), &g);
        assert!(res < 1e-10, "{res}");
    }

    #[test]
    fn weak_forms_are_symmetric() {
        let g = grid(24, 12, 1.0);
        for kind in [ScalarKind::Hk, ScalarKind::Xk] {
            let d = assemble_scalar(&kind, &g).unwrap().to_dense();
            assert!(symmetry_defect(&d) < 1e-12, "{}", symmetry_defect(&d));
        }
    }

    #[test]
    fn identity_sector_ground_and_scaling() {
        let g1 = grid(24, 20, 1.0);
        let g2 = grid(24, 20, 2.0);
        let e1 = numeric_spectrum(&g1, 3, Sector::IdentityRep).unwrap();
        let e2 = numeric_spectrum(&g2, 3, Sector::IdentityRep).unwrap();
        assert!((e1[0] - 26.0).abs() < 1e-8 * 26.0, "{e1:?}");
        for (a, b) in e1.iter().zip(&e2) {
            assert!((b / a - 2.0).abs() < 1e-8);
        }
        assert!(numeric_spectrum(&g1, 10_000, Sector::IdentityRep).is_err());
    }
}
