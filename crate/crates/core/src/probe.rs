//! Probe dictionaries and residual reports.
//!
//! Operator identities only hold spectrally on functions the grid resolves,
//! so every check applies both sides to a dictionary of smooth sampled
//! functions and reports the worst mismatch per unit probe norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dihedral::{grid_permutation, DihedralElement};
use crate::exact::{QuantumNumbers, WavefunctionSpec};
use crate::grid::{norm, Grid};
use crate::operator::{Gauge, OperatorMatrix};
use crate::par;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(check: impl Into<String>, residual: f64, scale: f64, tolerance: f64) -> Self {
        let scale = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
        let pass = residual.is_finite() && residual / scale <= tolerance;
        Self { check: check.into(), residual, scale, tolerance, pass }
    }

    /// A lower bound `value/scale >= floor`, stored inverted so that
    /// `pass ⇔ residual/scale <= tolerance` still holds: the residual is
    /// `scale`, the scale is `value` and the tolerance is `1/floor`.
    pub fn at_least(check: impl Into<String>, value: f64, scale: f64, floor: f64) -> Self {
        let value = if value.is_finite() && value > 0.0 { value } else { f64::MIN_POSITIVE };
        let tolerance = 1.0 / floor;
        Self { check: check.into(), residual: scale, scale: value, tolerance, pass: scale / value <= tolerance }
    }

    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

/// Which function family a probe set was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    /// Symmetric extensions of the exact eigenfunctions.
    Eigenfunctions,
    /// `e^{-ωr²/2} (r^k cos kφ)^p (r^k sin kφ)^q P(x, y)` with random `P`.
    MirrorFactored,
    /// Vectors produced by applying discretized operators to resolved probes.
    Generated,
}

#[derive(Clone, Debug)]
pub struct ProbeSet {
    pub labels: Vec<String>,
    pub vectors: Vec<Vec<f64>>,
    pub fermions: usize,
    pub class: Smoothness,
}

impl ProbeSet {
    pub fn new(labels: Vec<String>, vectors: Vec<Vec<f64>>, fermions: usize, class: Smoothness, grid: &Grid) -> Result<Self> {
        for v in &vectors {
            if v.len() != fermions * grid.nodes() {
                return Err(Error::Dimension { expected: fermions * grid.nodes(), got: v.len() });
            }
            let n = norm(v, grid)?;
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::Domain("probe with zero or non-finite norm".into()));
            }
        }
        Ok(Self { labels, vectors, fermions, class })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Normalized symmetric extensions of `Ψ_{N,n}` with `N + n <= max_sum`.
    pub fn wavefunctions(grid: &Grid, max_sum: u32) -> Result<Self> {
        let p = *grid.params();
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for s in 0..=max_sum {
            for n in 0..=s {
                let spec = WavefunctionSpec::normalized(p, QuantumNumbers::new(s - n, n))?;
                labels.push(format!("psi[{},{}]", s - n, n));
                vectors.push(grid.sample(|r, phi| spec.eval_extended(r, phi)));
            }
        }
        Self::new(labels, vectors, 1, Smoothness::Eigenfunctions, grid)
    }

    /// Like [`ProbeSet::wavefunctions`] but with the sign-keeping extension
    /// (integer couplings only).
    pub fn signed_wavefunctions(grid: &Grid, max_sum: u32) -> Result<Self> {
        let p = *grid.params();
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for s in 0..=max_sum {
            for n in 0..=s {
                let spec = WavefunctionSpec::normalized(p, QuantumNumbers::new(s - n, n))?;
                spec.eval_signed(1.0, 0.1)?;
                labels.push(format!("psi[{},{}]", s - n, n));
                vectors.push(grid.sample(|r, phi| spec.eval_signed(r, phi).unwrap_or(f64::NAN)));
            }
        }
        Self::new(labels, vectors, 1, Smoothness::Eigenfunctions, grid)
    }

    /// `count` random functions `e^{-ωr²/2} (r^k cos kφ)^p (r^k sin kφ)^q P(x, y)`
    /// with `deg P <= degree`, unit norm.
    pub fn mirror_factored(grid: &Grid, p: u32, q: u32, degree: u32, count: usize, seed: u64) -> Result<Self> {
        let k = grid.k as i32;
        let omega = grid.params().omega;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for idx in 0..count {
            let coeffs: Vec<(i32, i32, f64)> = (0..=degree as i32)
                .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
                .map(|(i, j)| (i, j, rng.random_range(-1.0..1.0)))
                .collect();
            let f = |r: f64, phi: f64| {
                let (x, y) = (r * phi.cos(), r * phi.sin());
                let rk = r.powi(k);
                let mirror = (rk * (k as f64 * phi).cos()).powi(p as i32) * (rk * (k as f64 * phi).sin()).powi(q as i32);
                let poly: f64 = coeffs.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum();
                (-0.5 * omega * r * r).exp() * mirror * poly
            };
            let v = grid.sample(f);
            let n = norm(&v, grid)?;
            labels.push(format!("mirror[{idx}]"));
            vectors.push(v.into_iter().map(|x| x / n).collect());
        }
        Self::new(labels, vectors, 1, Smoothness::MirrorFactored, grid)
    }

    /// `count` random functions `e^{-ωr²/2} (r^k cos kφ)^p (r^k sin kφ)^q P(r², r^{2k} cos 2kφ)`
    /// with `P` of total degree `<= degree` in its two invariant arguments and
    /// degree `<= max_v` in the second, unit norm. For `(p, q) = (a, b)` this is the span of the exact
    /// eigenfunctions, which the scalar operators map into itself.
    pub fn invariant_factored(grid: &Grid, p: u32, q: u32, degree: u32, max_v: u32, count: usize, seed: u64) -> Result<Self> {
        let k = grid.k as i32;
        let omega = grid.params().omega;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for idx in 0..count {
            let coeffs: Vec<(i32, i32, f64)> = (0..=degree as i32)
                .flat_map(|d| (0..=d.min(max_v as i32)).map(move |j| (d - j, j)))
                .map(|(i, j)| (i, j, rng.random_range(-1.0..1.0)))
                .collect();
            let f = |r: f64, phi: f64| {
                let rk = r.powi(k);
                let kp = k as f64 * phi;
                let mirror = (rk * kp.cos()).powi(p as i32) * (rk * kp.sin()).powi(q as i32);
                let (u, v) = (r * r, rk * rk * (2.0 * kp).cos());
                let poly: f64 = coeffs.iter().map(|&(i, j, c)| c * u.powi(i) * v.powi(j)).sum();
                (-0.5 * omega * r * r).exp() * mirror * poly
            };
            let v = grid.sample(f);
            let n = norm(&v, grid)?;
            labels.push(format!("invariant[{idx}]"));
            vectors.push(v.into_iter().map(|x| x / n).collect());
        }
        Self::new(labels, vectors, 1, Smoothness::MirrorFactored, grid)
    }

    /// `count` functions `e^{-ωr²/2} (r^k cos kφ)^p (r^k sin kφ)^q cos(κ·x + γ)`
    /// with random directions and phases, `|κ| = wavenumber`, unit norm.
    /// Unlike the polynomial family these are not resolved exactly, so
    /// residuals on them fall with resolution.
    pub fn mirror_waves(grid: &Grid, p: u32, q: u32, wavenumber: f64, count: usize, seed: u64) -> Result<Self> {
        let k = grid.k as i32;
        let omega = grid.params().omega;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for idx in 0..count {
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let gamma: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (kx, ky) = (wavenumber * theta.cos(), wavenumber * theta.sin());
            let f = |r: f64, phi: f64| {
                let rk = r.powi(k);
                let mirror = (rk * (k as f64 * phi).cos()).powi(p as i32) * (rk * (k as f64 * phi).sin()).powi(q as i32);
                (-0.5 * omega * r * r).exp() * mirror * (kx * r * phi.cos() + ky * r * phi.sin() + gamma).cos()
            };
            let v = grid.sample(f);
            let n = norm(&v, grid)?;
            labels.push(format!("wave[{idx}]"));
            vectors.push(v.into_iter().map(|x| x / n).collect());
        }
        Self::new(labels, vectors, 1, Smoothness::MirrorFactored, grid)
    }

    /// Adds the images of every probe under all `4k` group elements.
    pub fn with_dihedral_images(&self, grid: &Grid) -> Result<Self> {
        let mut out = self.clone();
        for g in DihedralElement::all(grid.k as u32).into_iter().skip(1) {
            let op = grid_permutation(&g, grid, self.fermions)?;
            for (l, v) in self.labels.iter().zip(&self.vectors) {
                out.labels.push(format!("{g}.{l}"));
                out.vectors.push(op.apply(v)?);
            }
        }
        Ok(out)
    }

    /// Fock-space probes: each scalar probe placed in one component, plus a
    /// seeded random mixture of all four per probe.
    pub fn fermionic(&self, grid: &Grid, seed: u64) -> Result<Self> {
        if self.fermions != 1 {
            return Err(Error::Domain("fermionic lift needs scalar probes".into()));
        }
        let n = grid.nodes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for (i, (l, v)) in self.labels.iter().zip(&self.vectors).enumerate() {
            let c = i % 4;
            let mut e = vec![0.0; 4 * n];
            e[c * n..(c + 1) * n].copy_from_slice(v);
            labels.push(format!("{l}|{c}>"));
            vectors.push(e);
            let mut mix = vec![0.0; 4 * n];
            for c in 0..4 {
                let other = &self.vectors[(i + c) % self.len()];
                let s: f64 = rng.random_range(-1.0..1.0);
                for (x, y) in mix[c * n..(c + 1) * n].iter_mut().zip(other) {
                    *x = s * y;
                }
            }
            labels.push(format!("{l}|mix>"));
            vectors.push(mix);
        }
        Self::new(labels, vectors, 4, self.class, grid)
    }

    /// Scalar probes tensored with the Fock vacuum `|00>`.
    pub fn with_vacuum(&self, grid: &Grid) -> Result<Self> {
        let n = grid.nodes();
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let mut e = vec![0.0; 4 * n];
                e[..n].copy_from_slice(v);
                e
            })
            .collect();
        let labels = self.labels.iter().map(|l| format!("{l}|0>")).collect();
        Self::new(labels, vectors, 4, self.class, grid)
    }

    pub fn extend(&mut self, other: ProbeSet) -> Result<()> {
        if other.fermions != self.fermions {
            return Err(Error::Dimension { expected: self.fermions, got: other.fermions });
        }
        self.labels.extend(other.labels);
        self.vectors.extend(other.vectors);
        Ok(())
    }
}

fn nodal(op: &OperatorMatrix) -> OperatorMatrix {
    op.in_gauge(Gauge::Nodal)
}

/// `max_ψ ‖Aψ‖ / ‖ψ‖` over the dictionary.
pub fn amplification(op: &OperatorMatrix, probes: &ProbeSet) -> Result<f64> {
    let op = nodal(op);
    let grid = op.grid().clone();
    let vals = par::map_collect(&probes.vectors, |v| -> Result<f64> { Ok(norm(&op.apply(v)?, &grid)? / norm(v, &grid)?) });
    vals.into_iter().try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
}

/// `max_ψ ‖Aψ‖ / ‖ψ‖`, plus the label of the worst probe.
pub fn worst_probe(op: &OperatorMatrix, probes: &ProbeSet) -> Result<(f64, String)> {
    let op = nodal(op);
    let grid = op.grid().clone();
    let vals = par::map_collect(&probes.vectors, |v| -> Result<f64> { Ok(norm(&op.apply(v)?, &grid)? / norm(v, &grid)?) });
    let mut best = (0.0, String::new());
    for (v, l) in vals.into_iter().zip(&probes.labels) {
        let v = v?;
        if v >= best.0 {
            best = (v, l.clone());
        }
    }
    Ok(best)
}

/// `lhs = rhs` on probes, scaled by the larger amplification.
pub fn check_equal(name: &str, lhs: &OperatorMatrix, rhs: &OperatorMatrix, probes: &ProbeSet, tol: f64) -> Result<ResidualReport> {
    let (l, r) = (nodal(lhs), nodal(rhs));
    let residual = amplification(&l.try_sub(&r)?, probes)?;
    let scale = amplification(&l, probes)?.max(amplification(&r, probes)?);
    Ok(ResidualReport::new(name, residual, scale, tol))
}

/// `[a, b] = rhs` (or `{a, b} = rhs`) on probes, scaled by `‖a‖_p ‖b‖_p`.
pub fn check_bracket(
    name: &str,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    anti: bool,
    rhs: Option<&OperatorMatrix>,
    probes: &ProbeSet,
    tol: f64,
) -> Result<ResidualReport> {
    let (a, b) = (nodal(a), nodal(b));
    let bracket = if anti { a.anticommutator(&b)? } else { a.commutator(&b)? };
    let diff = match rhs {
        Some(r) => bracket.try_sub(&nodal(r))?,
        None => bracket,
    };
    let residual = amplification(&diff, probes)?;
    let scale = amplification(&a, probes)? * amplification(&b, probes)?;
    Ok(ResidualReport::new(name, residual, scale, tol))
}

/// `⟨u, A v⟩ = ⟨B u, v⟩` over probe pairs (B the claimed adjoint), scaled by
/// the amplifications.
pub fn check_adjoint_pair(name: &str, a: &OperatorMatrix, b: &OperatorMatrix, probes: &ProbeSet, tol: f64) -> Result<ResidualReport> {
    let (a, b) = (nodal(a), nodal(b));
    let grid = a.grid().clone();
    let av = a.apply_all(&probes.vectors)?;
    let bu = b.apply_all(&probes.vectors)?;
    let mut worst: f64 = 0.0;
    for (i, u) in probes.vectors.iter().enumerate() {
        for (j, v) in probes.vectors.iter().enumerate() {
            let lhs = crate::grid::inner_product(u, &av[j], &grid)?;
            let rhs = crate::grid::inner_product(&bu[i], v, &grid)?;
            worst = worst.max((lhs - rhs).abs() / (norm(u, &grid)? * norm(v, &grid)?));
        }
    }
    let scale = amplification(&a, probes)?.max(amplification(&b, probes)?);
    Ok(ResidualReport::new(name, worst, scale, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ModelParams;
    use crate::grid::{build_grid, GridSpec};

    fn grid() -> Grid {
        build_grid(GridSpec::new(24, 12, ModelParams::new(1.0, 2.0, 2.0, 3.0).unwrap())).unwrap()
    }

    #[test]
    fn report_pass_rule() {
        assert!(ResidualReport::new("x", 1e-9, 10.0, 1e-9).pass);
        assert!(!ResidualReport::new("x", 1e-7, 10.0, 1e-9).pass);
        assert!(!ResidualReport::new("x", f64::NAN, 1.0, 1.0).pass);
        assert!(ResidualReport::at_least("w", 0.5, 1.0, 0.1).pass);
        assert!(!ResidualReport::at_least("w", 0.05, 1.0, 0.1).pass);
        assert!(!ResidualReport::at_least("w", 0.0, 1.0, 0.1).pass);
    }

    #[test]
    fn mirror_probes_are_unit_and_deterministic() {
        let g = grid();
        let a = ProbeSet::mirror_factored(&g, 2, 2, 3, 3, 7).unwrap();
        let b = ProbeSet::mirror_factored(&g, 2, 2, 3, 3, 7).unwrap();
        assert_eq!(a.vectors, b.vectors);
        for v in &a.vectors {
            assert!((norm(v, &g).unwrap() - 1.0).abs() < 1e-13);
        }
        let imgs = a.with_dihedral_images(&g).unwrap();
        assert_eq!(imgs.len(), 3 * 12);
    }

    #[test]
    fn zero_probe_rejected() {
        let g = grid();
        assert!(ProbeSet::new(vec!["z".into()], vec![vec![0.0; g.nodes()]], 1, Smoothness::Generated, &g).is_err());
    }

    #[test]
    fn equal_operators_give_zero_residual() {
        let g = grid();
        let probes = ProbeSet::wavefunctions(&g, 1).unwrap();
        let d = OperatorMatrix::d_phi(&g, 1);
        let rep = check_equal("dphi", &d, &(&d * &OperatorMatrix::identity(&g, 1)), &probes, 1e-14).unwrap();
        assert!(rep.pass && rep.residual == 0.0);
        let rep = check_adjoint_pair("dphi antisym", &d, &(-&d), &probes, 1e-12).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
