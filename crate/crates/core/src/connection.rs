//! How the two extensions meet: the dihedral elements realized on Fock space
//! turn `𝓗_k` into `𝓗^s − 4ωY`, which rests on two trigonometric sums.

use std::f64::consts::PI;

use crate::dunkl::{DunklOperators, HamiltonianForm};
use crate::exact::{energy, QuantumNumbers};
use crate::grid::{norm, Grid};
use crate::osp::{default_probes, OspGenerators};
use crate::probe::{check_equal, ProbeSet, ResidualReport};
use crate::{Error, Result};

/// `𝓗_k` with every group element replaced by its `4×4` fermionic matrix.
///
/// The exchange terms are taken in the normal-ordered form, with all group
/// elements to the right of the functions they multiply. The Dunkl form is
/// not equivalent there: a Fock-space matrix commutes with every function of
/// `φ`, a grid permutation does not.
pub fn substituted_hamiltonian(grid: &Grid) -> Result<crate::operator::OperatorMatrix> {
    DunklOperators::fermionic(grid)?.extended_hamiltonian(HamiltonianForm::NormalOrdered)
}

/// Substituted `𝓗_k` against `𝓗^s − 4ωY` on the module probes.
pub fn connection_check(grid: &Grid, tol: f64) -> Result<ResidualReport> {
    let gens = OspGenerators::new(grid)?;
    let probes = default_probes(&gens)?;
    connection_check_on(&gens, &probes, tol)
}

pub fn connection_check_on(gens: &OspGenerators, probes: &ProbeSet, tol: f64) -> Result<ResidualReport> {
    let grid = gens.grid();
    let lhs = substituted_hamiltonian(grid)?;
    let omega = grid.params().omega;
    let rhs = gens.hs.try_sub(&gens.y.scale(4.0 * omega))?;
    check_equal("substituted Hk = Hs - 4wY", &lhs, &rhs, probes, tol)
}

/// On `Ψ_{N,n}|0⟩` every fermionic group matrix acts as 1, so the substituted
/// operator reduces to `H_k` with no shift: the eigenvalue is `E_{N,n}`.
pub fn vacuum_sector_checks(grid: &Grid, max_sum: u32, tol: f64) -> Result<Vec<ResidualReport>> {
    let op = substituted_hamiltonian(grid)?;
    let p = *grid.params();
    let states = ProbeSet::signed_wavefunctions(grid, max_sum)?.with_vacuum(grid)?;
    let mut out = Vec::new();
    let mut idx = 0;
    for s in 0..=max_sum {
        for n in 0..=s {
            let qn = QuantumNumbers::new(s - n, n);
            let e = energy(qn, &p);
            let psi = &states.vectors[idx];
            idx += 1;
            let hpsi = op.apply(psi)?;
            let diff: Vec<f64> = hpsi.iter().zip(psi).map(|(x, y)| x - e * y).collect();
            out.push(ResidualReport::new(format!("substituted Hk Psi({},{})|0> = {e}", s - n, n), norm(&diff, grid)?, e.abs().max(1.0), tol));
        }
    }
    Ok(out)
}

/// Worst mismatch of
/// `Σ_i tan(φ + iπ/k) cos(2iπ/k) = −k sin((k−2)φ)/cos kφ` and
/// `Σ_i tan(φ + iπ/k) sin(2iπ/k) = k cos((k−2)φ)/cos kφ − δ_{k,1}`.
///
/// Each mismatch is divided by `max(1, Σ_i |tan(φ + iπ/k)|)`: an absolute
/// error where the sums are of order one, relative where a nearby pole makes
/// them large and round-off scales with them.
pub fn trig_identity_check(k: u32, samples: &[f64]) -> Result<f64> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenK(k as f64));
    }
    let kf = k as f64;
    let mut worst: f64 = 0.0;
    for &phi in samples {
        let ck = (kf * phi).cos();
        if ck.abs() < 1e-9 {
            return Err(Error::Pole(phi));
        }
        let (mut lhs1, mut lhs2, mut size) = (0.0, 0.0, 0.0f64);
        for i in 0..k {
            let shifted = phi + i as f64 * PI / kf;
            if shifted.cos().abs() < 1e-9 {
                return Err(Error::Pole(phi));
            }
            let t = shifted.tan();
            let (s2, c2) = (2.0 * i as f64 * PI / kf).sin_cos();
            lhs1 += t * c2;
            lhs2 += t * s2;
            size += t.abs();
        }
        size = size.max(1.0);
        let rhs1 = -kf * ((kf - 2.0) * phi).sin() / ck;
        let rhs2 = kf * ((kf - 2.0) * phi).cos() / ck - if k == 1 { 1.0 } else { 0.0 };
        worst = worst.max((lhs1 - rhs1).abs() / size).max((lhs2 - rhs2).abs() / size);
    }
    Ok(worst)
}

/// `count` seeded angles in `[0, 2π)`, kept away from the poles of both
/// sides.
pub fn trig_samples(k: u32, count: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let kf = k as f64;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let phi: f64 = rng.random_range(0.0..2.0 * PI);
        let near_pole = (kf * phi).cos().abs() < 1e-3 || (0..k).any(|i| (phi + i as f64 * PI / kf).cos().abs() < 1e-3);
        if !near_pole {
            out.push(phi);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ModelParams;
    use crate::grid::{build_grid, GridSpec};
    use proptest::prelude::*;

    #[test]
    fn trig_k_one_is_exact() {
        let s = trig_samples(1, 200, 3);
        assert!(trig_identity_check(1, &s).unwrap() < 1e-14);
    }

    #[test]
    fn trig_rejects_poles_and_even_k() {
        assert_eq!(trig_identity_check(3, &[PI / 6.0]), Err(Error::Pole(PI / 6.0)));
        assert!(matches!(trig_identity_check(4, &[0.1]), Err(Error::EvenK(_))));
    }

    proptest! {
        #[test]
        fn trig_identities_hold(k in (0u32..8).prop_map(|j| 2 * j + 1), seed in any::<u64>()) {
            let s = trig_samples(k, 50, seed);
            prop_assert!(trig_identity_check(k, &s).unwrap() < 1e-12);
        }
    }

    #[test]
    fn connection_k1() {
        let g = build_grid(GridSpec::new(32, 24, ModelParams::new(1.0, 1.0, 1.0, 1.0).unwrap()).with_radial_shift(1)).unwrap();
        let r = connection_check(&g, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        for r in vacuum_sector_checks(&g, 2, 1e-8).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }
}
