//! Verification suites. Each one gathers the residual reports for one family
//! of identities at a parameter point, on grids derived from the requested
//! `(M, Nr)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix4};
use serde::{Deserialize, Serialize};

use crate::connection::{connection_check_on, trig_identity_check, trig_samples, vacuum_sector_checks};
use crate::dihedral::{identity_projector, DihedralElement};
use crate::dunkl::{dense_bracket_stats, AngularForm, DunklOperators, HamiltonianForm, ProjectedIntegrals};
use crate::exact::{levels, wedge_gram, ModelParams};
use crate::fermion::dihedral_fermionic;
use crate::grid::{build_grid, norm, Grid, GridSpec};
use crate::operator::OperatorMatrix;
use crate::osp::{
    adjoint_pairs, angular_budget, bracket_table, default_probes, integer_couplings, lws_check, module_probes, module_radial_shift,
    resolved_eigenstates, ritz_values, rotation_checks, susy_checks, susy_spectrum_checks, vacuum_charge_check, weight_checks,
    OspGenerators,
};
use crate::probe::{check_adjoint_pair, check_bracket, check_equal, ProbeSet, ResidualReport};
use crate::scalar::{numeric_spectrum, strong_operator, ScalarKind, Sector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Dihedral,
    Dunkl,
    Superintegrability,
    Susy,
    Connection,
    Trig,
    Spectrum,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Dihedral, Suite::Dunkl, Suite::Superintegrability, Suite::Susy, Suite::Connection, Suite::Trig, Suite::Spectrum];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dihedral => "dihedral",
            Suite::Dunkl => "dunkl",
            Suite::Superintegrability => "superintegrability",
            Suite::Susy => "susy",
            Suite::Connection => "connection",
            Suite::Trig => "trig",
            Suite::Spectrum => "spectrum",
        }
    }

    /// Suites that build Dunkl operators or the trigonometric sums, which
    /// exist for odd `k` only.
    pub fn needs_odd_k(self) -> bool {
        matches!(self, Suite::Dunkl | Suite::Superintegrability | Suite::Connection | Suite::Trig)
    }

    /// Suites whose grid must have `M` a multiple of `8k`.
    pub fn needs_grid(self) -> bool {
        !matches!(self, Suite::Trig | Suite::Dihedral)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite '{s}' (expected one of {})", names.join(", "))
        })
    }
}

/// Named tolerances and their defaults.
pub const DEFAULT_TOLERANCES: [(&str, f64); 22] = [
    ("group-exact", 1e-14),
    ("group-float", 1e-12),
    ("first-order", 1e-8),
    ("dunkl", 1e-7),
    ("hermiticity", 1e-9),
    ("invariance", 1e-9),
    ("y-invariance", 1e-8),
    ("projection", 1e-9),
    ("integrals", 1e-5),
    ("witness", 0.1),
    ("osp", 1e-8),
    ("adjoint", 1e-8),
    ("nilpotent", 1e-10),
    ("lws", 1e-7),
    ("weights", 1e-8),
    ("rotation", 1e-10),
    ("susy-spectrum", 1e-6),
    ("connection", 1e-7),
    ("trig", 1e-12),
    ("spectrum", 1e-6),
    ("orthonormality", 1e-10),
    ("scaling", 1e-8),
];

pub fn default_tolerances() -> BTreeMap<String, f64> {
    DEFAULT_TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Parameter point, base resolution and tolerances shared by all suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSettings {
    pub params: ModelParams,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Nr")]
    pub nr: usize,
    pub tolerances: BTreeMap<String, f64>,
    /// Also run the `k = 5` superintegrability checks.
    #[serde(default)]
    pub slow: bool,
}

impl SuiteSettings {
    pub fn new(params: ModelParams, m: usize, nr: usize) -> Self {
        Self { params, m, nr, tolerances: default_tolerances(), slow: false }
    }

    /// Overrides one tolerance; the name must be one of [`DEFAULT_TOLERANCES`].
    pub fn set_tolerance(&mut self, name: &str, value: f64) -> Result<()> {
        if !DEFAULT_TOLERANCES.iter().any(|(k, _)| *k == name) {
            return Err(Error::Domain(format!("unknown tolerance '{name}'")));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Domain(format!("tolerance '{name}' must be positive, got {value}")));
        }
        self.tolerances.insert(name.to_string(), value);
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| DEFAULT_TOLERANCES.iter().find(|(k, _)| *k == name).map(|&(_, v)| v))
            .unwrap_or_else(|| panic!("no tolerance named {name}"))
    }

    /// Domain checks for a suite before anything is assembled.
    pub fn validate_for(&self, suite: Suite) -> Result<()> {
        self.params.validate()?;
        if suite.needs_odd_k() {
            self.params.odd_k()?;
        }
        if suite.needs_grid() {
            GridSpec::new(self.m, self.nr, self.params).validate()?;
        }
        Ok(())
    }

    fn with_k(&self, k: u32, m: usize) -> Result<Self> {
        let p = self.params;
        Ok(Self { params: ModelParams::new(p.omega, p.a, p.b, k as f64)?, m, ..self.clone() })
    }
}

pub fn run_suite(suite: Suite, s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    s.validate_for(suite)?;
    match suite {
        Suite::Dihedral => dihedral_suite(s),
        Suite::Dunkl => dunkl_suite(s),
        Suite::Superintegrability => superintegrability_suite(s),
        Suite::Susy => susy_suite(s),
        Suite::Connection => connection_suite(s),
        Suite::Trig => trig_suite(s),
        Suite::Spectrum => spectrum_suite(s),
    }
}

fn prefixed(prefix: &str, reports: Vec<ResidualReport>) -> Vec<ResidualReport> {
    reports.into_iter().map(|r| ResidualReport { check: format!("{prefix}: {}", r.check), ..r }).collect()
}

// ---------------------------------------------------------------- dihedral

/// Group table against the grid permutations and the Fock-space matrices,
/// for `k ∈ {1, 3, 5}` and the configured `k`.
fn dihedral_suite(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let mut ks: BTreeSet<u32> = [1, 3, 5].into();
    ks.insert(s.params.integer_k()? as u32);
    let mut out = Vec::new();
    for k in ks {
        out.extend(prefixed(&format!("k={k}"), dihedral_checks(k, s)?));
    }
    Ok(out)
}

pub fn dihedral_checks(k: u32, s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let (exact, float) = (s.tol("group-exact"), s.tol("group-float"));
    let m = 8 * k as usize;
    let elements = DihedralElement::all(k);
    let one = DihedralElement::identity(k);
    let (r, i) = (DihedralElement::rotation(k, 1), DihedralElement::reflection(k, 0));

    // presentation: ℛ^{2k} = ℐ² = 1 and ℐℛℐ = ℛ^{-1}
    let mut power = one;
    for _ in 0..2 * k {
        power = power.multiply(&r)?;
    }
    let conj = i.multiply(&r)?.multiply(&i)?;
    let bad = [power != one, i.multiply(&i)? != one, conj != r.inverse()].iter().filter(|&&b| b).count();
    let mut out = vec![ResidualReport::new("presentation R^2k = I^2 = 1, IRI = R^-1 (violations)", bad as f64, 1.0, exact)];

    let perms = elements.iter().map(|g| g.angular_permutation(m)).collect::<Result<Vec<_>>>()?;
    let rho: Vec<Matrix4<f64>> = elements.iter().map(dihedral_fermionic).collect();
    let index = |g: &DihedralElement| elements.iter().position(|h| h == g).expect("closed");
    let (mut perm_bad, mut fermi_err, mut orth_err) = (0usize, 0.0f64, 0.0f64);
    for (a, ga) in elements.iter().enumerate() {
        orth_err = orth_err.max((rho[a] * rho[a].transpose() - Matrix4::identity()).abs().max());
        for (b, gb) in elements.iter().enumerate() {
            let c = index(&ga.multiply(gb)?);
            // (g h f)(φ_m) = (h f)(φ_{π_g(m)}) = f(φ_{π_h(π_g(m))})
            perm_bad += (0..m).filter(|&x| perms[b][perms[a][x]] != perms[c][x]).count();
            fermi_err = fermi_err.max((rho[a] * rho[b] - rho[c]).abs().max());
        }
    }
    out.push(ResidualReport::new("group table vs grid permutations (mismatched entries)", perm_bad as f64, 1.0, exact));
    out.push(ResidualReport::new("group table vs fermionic matrices", fermi_err, 1.0, float));
    out.push(ResidualReport::new("fermionic matrices orthogonal", orth_err, 1.0, float));

    // the permutations against the geometric action they encode
    let gs = GridSpec::new(m, 1, ModelParams::new(s.params.omega, s.params.a, s.params.b, k as f64)?);
    let grid = build_grid(gs)?;
    let mut geo: f64 = 0.0;
    for (g, perm) in elements.iter().zip(&perms) {
        let shift = g.i as f64 * std::f64::consts::PI / k as f64;
        for (x, &y) in perm.iter().enumerate() {
            let target = if g.reflected { -grid.phi[x] - shift } else { grid.phi[x] + shift };
            let d = (grid.phi[y] - target).rem_euclid(std::f64::consts::TAU);
            geo = geo.max(d.min(std::f64::consts::TAU - d));
        }
    }
    out.push(ResidualReport::new("permutations realize phi -> +-phi + i pi/k", geo, 1.0, float));
    Ok(out)
}

// ---------------------------------------------------------------- dunkl

/// Integer exponents for the mirror factor of the probes, and the radial
/// shift they allow: every intermediate function in the operator products
/// vanishes at least like `r^{k(p+q) - 2}`.
fn mirror_exponents(p: &ModelParams) -> (u32, u32, u32) {
    let (a, b) = (p.a.floor() as u32, p.b.floor() as u32);
    let k = p.k.round() as u32;
    (a, b, (k * (a + b)).saturating_sub(2))
}

fn dunkl_grid(s: &SuiteSettings, m: usize, nr: usize) -> Result<Grid> {
    let (_, _, shift) = mirror_exponents(&s.params);
    build_grid(GridSpec::new(m, nr, s.params).with_radial_shift(shift))
}

/// Smooth non-polynomial probes and all their group images: the relations
/// hold exactly on them, and the discretization error they carry shrinks
/// with resolution.
pub fn dunkl_probes(grid: &Grid) -> Result<ProbeSet> {
    let (p, q, _) = mirror_exponents(grid.params());
    ProbeSet::mirror_waves(grid, p, q, 0.3, 2, 11)?.with_dihedral_images(grid)
}

/// Exchange and adjoint relations of the Dunkl operators, the modified
/// bosons and the oscillators, the equivalence of the `𝓗_k` forms and its
/// invariance, hermiticity and identity-sector projection.
pub fn dunkl_relations(ops: &DunklOperators, probes: &ProbeSet, s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let (first, second) = (s.tol("first-order"), s.tol("dunkl"));
    let grid = ops.grid();
    let k = ops.k();
    let omega = grid.params().omega;
    let (r, r_inv, i) = (ops.rot(1), ops.rot(-1), ops.refl(0));
    let conj = |g: &OperatorMatrix, x: &OperatorMatrix, g_inv: &OperatorMatrix| -> Result<OperatorMatrix> { g.try_mul(x)?.try_mul(g_inv) };
    let mut out = Vec::new();

    out.push(check_adjoint_pair("Dr^+ = -Dr - (1 + 2C)/r", &ops.d_r, &ops.d_r_adjoint_formula()?, probes, first)?);
    out.push(check_adjoint_pair("Dphi^+ = -Dphi", &ops.d_phi, &ops.d_phi.scale(-1.0), probes, first)?);
    out.push(check_equal("R Dr = Dr R", &r.try_mul(&ops.d_r)?, &ops.d_r.try_mul(r)?, probes, first)?);
    out.push(check_equal("I Dr = Dr I", &i.try_mul(&ops.d_r)?, &ops.d_r.try_mul(i)?, probes, first)?);
    out.push(check_equal("R Dphi = Dphi R", &r.try_mul(&ops.d_phi)?, &ops.d_phi.try_mul(r)?, probes, first)?);
    out.push(check_equal("I Dphi = -Dphi I", &i.try_mul(&ops.d_phi)?, &ops.d_phi.try_mul(i)?.scale(-1.0), probes, first)?);
    out.push(check_bracket("[Dr,Dphi] = -(2/r) C Dphi", &ops.d_r, &ops.d_phi, false, Some(&ops.radial_angular_commutator_formula()?), probes, second)?);

    let a: Vec<OperatorMatrix> = (0..k).map(|j| ops.boson(j, false)).collect::<Result<_>>()?;
    let ad: Vec<OperatorMatrix> = (0..k).map(|j| ops.boson(j, true)).collect::<Result<_>>()?;
    for j in 0..k {
        out.push(check_adjoint_pair(&format!("A{j}^+ is the adjoint of A{j}"), &a[j], &ad[j], probes, first)?);
        let next = if j + 1 < k { a[j + 1].clone() } else { a[0].scale(-1.0) };
        let rhs = if j + 1 < k { format!("A{}", j + 1) } else { "-A0".into() };
        out.push(check_equal(&format!("R A{j} R^-1 = {rhs}"), &conj(r, &a[j], r_inv)?, &next, probes, first)?);
        let (img, rhs) = if j == 0 { (a[0].clone(), "A0".to_string()) } else { (a[k - j].scale(-1.0), format!("-A{}", k - j)) };
        out.push(check_equal(&format!("I A{j} I = {rhs}"), &conj(i, &a[j], i)?, &img, probes, first)?);
    }
    for x in 0..k {
        for y in x..k {
            out.push(check_bracket(&format!("[A{x},A{y}] = 0"), &a[x], &a[y], false, None, probes, second)?);
            out.push(check_bracket(&format!("[A{x}^+,A{y}^+] = 0"), &ad[x], &ad[y], false, None, probes, second)?);
            let formula = ops.boson_commutator_formula(x, y)?;
            out.push(check_bracket(&format!("[A{x},A{y}^+] formula"), &a[x], &ad[y], false, Some(&formula), probes, second)?);
            if x != y {
                out.push(check_bracket(&format!("[A{y},A{x}^+] = [A{x},A{y}^+]"), &a[y], &ad[x], false, Some(&formula), probes, second)?);
            }
        }
    }

    let h: Vec<OperatorMatrix> = (0..k).map(|j| ops.component_hamiltonian(j)).collect::<Result<_>>()?;
    for j in 0..k {
        let (next, rhs) = (&h[(j + 1) % k], (j + 1) % k);
        out.push(check_equal(&format!("R H{j} R^-1 = H{rhs}"), &conj(r, &h[j], r_inv)?, next, probes, second)?);
        let img = (k - j) % k;
        out.push(check_equal(&format!("I H{j} I = H{img}"), &conj(i, &h[j], i)?, &h[img], probes, second)?);
    }

    let big_h = ops.extended_hamiltonian(HamiltonianForm::Dunkl)?;
    if k >= 3 {
        let terms: Vec<(f64, &OperatorMatrix)> = h.iter().map(|x| (2.0 * omega, x)).collect();
        let sum = OperatorMatrix::linear_combination(&terms)?;
        out.push(check_equal("2w sum_i Hi = (k/2) Hk", &sum, &big_h.scale(k as f64 / 2.0), probes, second)?);
    }
    for form in [HamiltonianForm::Radial, HamiltonianForm::NormalOrdered] {
        out.push(check_equal(&format!("Hk Dunkl form = {form:?} form"), &big_h, &ops.extended_hamiltonian(form)?, probes, second)?);
    }
    let big_x = ops.extended_angular(AngularForm::Square)?;
    out.push(check_equal("Xk = -Dphi^2 expanded", &big_x, &ops.extended_angular(AngularForm::Expanded)?, probes, second)?);

    let inv = s.tol("invariance");
    for (name, g, g_inv) in [("R", r, r_inv), ("I", i, i)] {
        out.push(check_equal(&format!("{name} Hk {name}^-1 = Hk"), &conj(g, &big_h, g_inv)?, &big_h, probes, inv)?);
        out.push(check_equal(&format!("{name} Xk {name}^-1 = Xk"), &conj(g, &big_x, g_inv)?, &big_x, probes, inv)?);
    }
    let herm = s.tol("hermiticity");
    out.push(check_adjoint_pair("Hk symmetric", &big_h, &big_h, probes, herm)?);
    out.push(check_adjoint_pair("Xk symmetric", &big_x, &big_x, probes, herm)?);
    for (j, hj) in h.iter().enumerate() {
        out.push(check_adjoint_pair(&format!("H{j} symmetric"), hj, hj, probes, herm)?);
    }

    let proj_tol = s.tol("projection");
    let sym = symmetric_part(grid, probes)?;
    let p = grid.params();
    let hk = strong_operator(&ScalarKind::Hk, grid)?;
    out.push(check_equal("Hk on the identity sector = scalar Hk", &big_h, &hk, &sym, proj_tol)?);
    // the group-algebra constant survives the projection of -Dphi^2
    let shift = OperatorMatrix::identity(grid, 1).scale(p.k * p.k * (p.a + p.b).powi(2));
    let xk = strong_operator(&ScalarKind::Xk, grid)?;
    out.push(check_equal("Xk + k^2(a+b)^2 on the identity sector = scalar Xk", &big_x.try_add(&shift)?, &xk, &sym, proj_tol)?);
    Ok(out)
}

/// Group averages of the probes, renormalized; the ones that average to
/// (nearly) nothing are dropped.
fn symmetric_part(grid: &Grid, probes: &ProbeSet) -> Result<ProbeSet> {
    let proj = identity_projector(grid)?.projector;
    let (mut labels, mut vectors) = (Vec::new(), Vec::new());
    for (l, v) in probes.labels.iter().zip(&probes.vectors) {
        let w = proj.apply(v)?;
        let n = norm(&w, grid)?;
        if n > 1e-3 * norm(v, grid)? {
            labels.push(format!("P.{l}"));
            vectors.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    ProbeSet::new(labels, vectors, 1, probes.class, grid)
}

/// Relative residual at the reference scale against the doubled one; the
/// doubled run passes if it is no larger, or if both sit at the round-off
/// floor.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

fn dunkl_suite(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let grid = dunkl_grid(s, s.m, s.nr)?;
    let reference = dunkl_relations(&DunklOperators::new(&grid)?, &dunkl_probes(&grid)?, s)?;
    let fine_grid = dunkl_grid(s, 2 * s.m, 2 * s.nr)?;
    let fine = dunkl_relations(&DunklOperators::new(&fine_grid)?, &dunkl_probes(&fine_grid)?, s)?;
    let mut out = reference.clone();
    for (c, f) in reference.iter().zip(&fine) {
        // pass ⇔ fine ≤ max(coarse, floor)
        out.push(ResidualReport::new(
            format!("{} does not grow from ({},{}) to ({},{})", c.check, s.m, s.nr, 2 * s.m, 2 * s.nr),
            f.relative(),
            c.relative().max(ROUNDOFF_FLOOR),
            1.0,
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- superintegrability

/// Witness grid: `Ψ_{N,n}` with `N + n <= 3` times `Y_{2k}` reaches angular
/// degree `8k`, so `M >= 24k`.
pub fn witness_m(s: &SuiteSettings) -> usize {
    let k = s.params.k.round() as usize;
    s.m.max(24 * k).div_ceil(8 * k) * 8 * k
}

/// Coefficient probes in the identity sector: the exact eigenfunctions with
/// `N + n <= max_sum` whose product with `Y_{2k}` stays below the angular
/// Nyquist frequency `M/2`.
fn sector_probes(ints: &ProjectedIntegrals, grid: &Grid, max_sum: u32) -> Result<(Vec<String>, Vec<DVector<f64>>)> {
    let p = grid.params();
    let room = (grid.m() / 2) as f64 - 1.0 - p.k * (p.a + p.b) - 2.0 * p.k;
    let psi = ProbeSet::wavefunctions(grid, max_sum)?;
    let (mut labels, mut coeffs) = (Vec::new(), Vec::new());
    for (l, v) in psi.labels.iter().zip(&psi.vectors) {
        let n: f64 = l.trim_end_matches(']').rsplit(',').next().and_then(|x| x.parse().ok()).unwrap_or(f64::INFINITY);
        if 2.0 * n * p.k <= room {
            labels.push(l.clone());
            coeffs.push(ints.coordinates(v));
        }
    }
    Ok((labels, coeffs))
}

fn dense_report(name: &str, a: &DMatrix<f64>, b: &DMatrix<f64>, probes: &[DVector<f64>], tol: f64) -> ResidualReport {
    let st = dense_bracket_stats(a, b, probes);
    ResidualReport::new(name, st.residual, st.scale, tol)
}

fn superintegrability_suite(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let mut out = superintegrability_checks(s)?;
    if s.slow && s.params.k.round() as u32 != 5 {
        let slow = s.with_k(5, 80)?;
        out.extend(prefixed("k=5", superintegrability_checks(&slow)?));
    }
    Ok(out)
}

pub fn superintegrability_checks(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let tol = s.tol("integrals");
    let grid = dunkl_grid(s, s.m, s.nr)?;
    let ops = DunklOperators::new(&grid)?;
    let (p, q, _) = mirror_exponents(grid.params());
    let probes = ProbeSet::mirror_factored(&grid, p, q, 3, 2, 5)?.with_dihedral_images(&grid)?;
    let big_h = ops.extended_hamiltonian(HamiltonianForm::Dunkl)?;
    let mut out = Vec::new();
    for j in 0..ops.k() {
        out.push(check_bracket(&format!("[Hk,H{j}] = 0"), &big_h, &ops.component_hamiltonian(j)?, false, None, &probes, tol)?);
    }
    let big_x = ops.extended_angular(AngularForm::Square)?;
    out.push(check_bracket("[Hk,Xk] = 0", &big_h, &big_x, false, None, &probes, tol)?);
    let big_y = ops.symmetrized_y()?;
    out.push(check_bracket("[Hk,Y2k] = 0", &big_h, &big_y, false, None, &probes, tol)?);
    let inv = s.tol("y-invariance");
    out.push(check_equal("R Y2k R^-1 = Y2k", &ops.rot(1).try_mul(&big_y)?.try_mul(ops.rot(-1))?, &big_y, &probes, inv)?);
    out.push(check_equal("I Y2k I = Y2k", &ops.refl(0).try_mul(&big_y)?.try_mul(ops.refl(0))?, &big_y, &probes, inv)?);
    out.push(check_adjoint_pair("Y2k symmetric", &big_y, &big_y, &probes, s.tol("hermiticity"))?);

    let (projected, _) = projected_checks(s)?;
    out.extend(projected);
    Ok(out)
}

/// `[H_k, X_k]`, `[H_k, Y_{2k}]` and `[X_k, Y_{2k}]` on the identity sector,
/// on the witness grid. The last must not vanish (the witness, reported
/// last).
///
/// Also returns the mixing of the `X` and `Y` eigenbases on the lowest
/// degenerate level `{Ψ_{k,0}, Ψ_{0,1}}`: `|β| / √(((α−γ)/2)² + β²)` for the
/// `Y` block `[[α, β], [β, γ]]` in the `X` eigenbasis, the sine of twice the
/// rotation angle. `None` when that level is outside the probe set.
pub fn projected_checks(s: &SuiteSettings) -> Result<(Vec<ResidualReport>, Option<f64>)> {
    let tol = s.tol("integrals");
    let m = witness_m(s);
    let grid = dunkl_grid(s, m, s.nr)?;
    let ops = DunklOperators::new(&grid)?;
    let ints = ProjectedIntegrals::new(&ops)?;
    let (labels, coeffs) = sector_probes(&ints, &grid, 3)?;
    let mut out = vec![
        dense_report(&format!("projected [H,X] = 0 (M={m})"), &ints.h, &ints.x, &coeffs, tol),
        dense_report(&format!("projected [H,Y] = 0 (M={m})"), &ints.h, &ints.y, &coeffs, tol),
    ];
    let st = dense_bracket_stats(&ints.x, &ints.y, &coeffs);
    out.push(ResidualReport::at_least(format!("[Xk,Y2k] != 0 (witness, M={m}; stored as scale/commutator)"), st.residual, st.scale, s.tol("witness")));

    let k = grid.params().k.round() as u32;
    let find = |big_n: u32, n: u32| labels.iter().position(|l| *l == format!("psi[{big_n},{n}]"));
    let mixing = find(k, 0).zip(find(0, 1)).map(|(i, j)| {
        let (u, v) = (coeffs[i].normalize(), coeffs[j].normalize());
        let alpha = u.dot(&(&ints.y * &u));
        let gamma = v.dot(&(&ints.y * &v));
        let beta = 0.5 * (u.dot(&(&ints.y * &v)) + v.dot(&(&ints.y * &u)));
        beta.abs() / (((alpha - gamma) / 2.0).powi(2) + beta * beta).sqrt()
    });
    Ok((out, mixing))
}

// ---------------------------------------------------------------- susy and connection

/// Grid for the osp checks: `Ψ_{N,n}` with `N + n <= 3` carries angular
/// frequency up to `k(a+b) + 6k`, which must stay below `M/2`.
pub fn susy_grid(s: &SuiteSettings) -> Result<Grid> {
    let p = s.params;
    let k = p.integer_k()?;
    let need = (2.0 * (p.k * (p.a + p.b) + 6.0 * p.k + 1.0)).ceil() as usize;
    let m = s.m.max(need).div_ceil(8 * k) * 8 * k;
    build_grid(GridSpec::new(m, s.nr, p).with_radial_shift(module_radial_shift(&p)))
}

fn susy_suite(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let grid = susy_grid(s)?;
    let gens = OspGenerators::new(&grid)?;
    let probes = default_probes(&gens)?;
    let mut out = bracket_table(&gens, &probes, s.tol("osp"))?;
    out.extend(adjoint_pairs(&gens, &probes, s.tol("adjoint"))?);
    out.extend(susy_checks(&gens, &probes, s.tol("osp"), s.tol("nilpotent"))?);
    out.extend(susy_spectrum_checks(&gens, 3, s.tol("susy-spectrum"))?);
    out.extend(lws_check(&gens, s.tol("lws"))?);
    out.extend(weight_checks(&gens, angular_budget(&grid)?.min(3), s.tol("weights"))?);
    out.extend(rotation_checks(&grid, &probes, s.tol("rotation"))?);
    out.push(vacuum_charge_check(&gens, &resolved_eigenstates(&grid, 2)?, s.tol("weights"))?);
    Ok(out)
}

fn connection_suite(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let grid = susy_grid(s)?;
    let gens = OspGenerators::new(&grid)?;
    let probes = default_probes(&gens)?;
    let tol = s.tol("connection");
    let mut out = vec![connection_check_on(&gens, &probes, tol)?];
    out.extend(vacuum_sector_checks(&grid, 2, tol)?);
    Ok(out)
}

// ---------------------------------------------------------------- trig

pub const TRIG_SAMPLES: usize = 1000;

/// Every odd `k <= 15`, plus the configured one.
fn trig_suite(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let mut ks: BTreeSet<u32> = (0..8).map(|j| 2 * j + 1).collect();
    ks.insert(s.params.odd_k()? as u32);
    let tol = s.tol("trig");
    ks.into_iter()
        .map(|k| {
            let err = trig_identity_check(k, &trig_samples(k, TRIG_SAMPLES, k as u64))?;
            Ok(ResidualReport::new(format!("k={k}: tangent sums over {TRIG_SAMPLES} angles"), err, 1.0, tol))
        })
        .collect()
}

// ---------------------------------------------------------------- spectrum

/// Number of levels `N + nk = m` compared against the exact spectrum.
pub const SPECTRUM_LEVELS: u32 = 8;

fn spectrum_suite(s: &SuiteSettings) -> Result<Vec<ResidualReport>> {
    let p = s.params;
    let k = p.integer_k()? as u32;
    let grid = build_grid(GridSpec::new(s.m, s.nr, p))?;
    let exact = levels(&p, SPECTRUM_LEVELS - 1)?;
    let count = exact.len();
    // twice as many eigenvalues as states, so each level can be matched even
    // when an unresolved mode from higher up falls among them
    let numeric = numeric_spectrum(&grid, (2 * count).min(grid.nodes() / (4 * k as usize)), Sector::IdentityRep)?;
    let tol = s.tol("spectrum");
    let mut out = Vec::new();
    for m in 0..SPECTRUM_LEVELS {
        let e = exact.iter().find(|d| d.qn.big_n + k * d.qn.n == m).expect("level present").energy;
        let expected = (m / k + 1) as usize;
        let mut dist: Vec<f64> = numeric.iter().map(|x| (x - e).abs()).collect();
        dist.sort_by(f64::total_cmp);
        let err = dist.get(expected - 1).copied().unwrap_or(f64::INFINITY);
        out.push(ResidualReport::new(format!("identity-sector level m={m}: E = {e}"), err, e.abs(), tol));
        let found = dist.iter().filter(|&&d| d <= tol * e.abs()).count();
        out.push(ResidualReport::new(
            format!("level m={m} degeneracy {expected} (numeric {found})"),
            (found as f64 - expected as f64).abs(),
            1.0,
            s.tol("group-exact"),
        ));
    }

    let (_, gram) = wedge_gram(&p, 4)?;
    let dev = gram.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &x)| (x - if i == j { 1.0 } else { 0.0 }).abs())).fold(0.0, f64::max);
    out.push(ResidualReport::new("Gram matrix of Psi(N,n), N+n <= 4", dev, 1.0, s.tol("orthonormality")));

    let scaling = s.tol("scaling");
    let doubled = ModelParams::new(2.0 * p.omega, p.a, p.b, p.k)?;
    let numeric2 = numeric_spectrum(&build_grid(GridSpec::new(s.m, s.nr, doubled))?, numeric.len(), Sector::IdentityRep)?;
    let ratio = numeric.iter().zip(&numeric2).map(|(x, y)| (y / x - 2.0).abs()).fold(0.0, f64::max);
    out.push(ResidualReport::new("Hk eigenvalues double with omega (ratio - 2)", ratio, 2.0, scaling));

    if integer_couplings(&grid).is_ok() {
        let ritz = |params: ModelParams| -> Result<Vec<f64>> {
            let g = susy_grid(&SuiteSettings { params, ..s.clone() })?;
            let gens = OspGenerators::new(&g)?;
            ritz_values(&gens, &module_probes(&gens, &resolved_eigenstates(&g, 2)?)?)
        };
        let (e1, e2) = (ritz(p)?, ritz(doubled)?);
        if e1.len() != e2.len() {
            return Err(Error::Dimension { expected: e1.len(), got: e2.len() });
        }
        // ℰ_{0,0} = 0, so the comparison is against the spectral scale
        let worst = e1.iter().zip(&e2).map(|(x, y)| (y - 2.0 * x).abs()).fold(0.0, f64::max);
        let scale = e2.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        out.push(ResidualReport::new(format!("Hs eigenvalues double with omega ({} module states)", e1.len()), worst, scale, scaling));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("all".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerances_are_validated() {
        let mut s = SuiteSettings::new(ModelParams::default(), 48, 32);
        assert!(s.set_tolerance("trig", 1e-13).is_ok());
        assert_eq!(s.tol("trig"), 1e-13);
        assert!(s.set_tolerance("trig", 0.0).is_err());
        assert!(s.set_tolerance("nonsense", 1.0).is_err());
    }

    #[test]
    fn even_k_rejected_for_dunkl_suites() {
        let s = SuiteSettings::new(ModelParams::new(1.0, 2.0, 2.0, 2.0).unwrap(), 32, 8);
        assert!(matches!(run_suite(Suite::Dunkl, &s), Err(Error::EvenK(_))));
        assert!(matches!(run_suite(Suite::Trig, &s), Err(Error::EvenK(_))));
    }

    #[test]
    fn dihedral_suite_passes() {
        let s = SuiteSettings::new(ModelParams::default(), 48, 32);
        for r in run_suite(Suite::Dihedral, &s).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn trig_suite_k9() {
        let s = SuiteSettings::new(ModelParams::new(1.0, 2.0, 2.0, 9.0).unwrap(), 72, 4);
        let reps = run_suite(Suite::Trig, &s).unwrap();
        assert_eq!(reps.len(), 8);
        assert!(reps.iter().all(|r| r.pass));
    }

    #[test]
    fn witness_grid_is_aligned() {
        let s = SuiteSettings::new(ModelParams::default(), 48, 32);
        assert_eq!(witness_m(&s), 72);
        let s1 = SuiteSettings::new(ModelParams::new(1.0, 2.0, 2.0, 1.0).unwrap(), 32, 24);
        assert_eq!(witness_m(&s1), 32);
    }
}
