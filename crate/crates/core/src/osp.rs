//! The osp(2|2) generators of the supersymmetric extension, on `F = 4` grid
//! vectors.
//!
//! The rotated fermions `b̄_x = b_x cos φ + b_y sin φ`,
//! `b̄_y = b_y cos φ − b_x sin φ` never appear as primitives: every
//! generator is a node-dependent matrix in the fixed basis, so `∂_φ` acts on
//! the components only and `[∂_φ, b̄_x] = b̄_y` comes out of the coefficients.

use nalgebra::{DMatrix, DVector, Matrix4};

use crate::exact::{eigen_data, ModelParams, QuantumNumbers};
use crate::fermion::FermionAlgebra;
use crate::grid::{inner_product, norm, Grid};
use crate::numerics::symmetric_eigen;
use crate::operator::OperatorMatrix;
use crate::probe::{amplification, check_adjoint_pair, check_bracket, check_equal, ProbeSet, ResidualReport, Smoothness};
use crate::scalar::{strong_operator, ScalarKind};
use crate::{Error, Result};

/// Which rotated mode, and whether it is the creation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    X,
    Y,
}

#[derive(Clone, Debug)]
pub struct OspGenerators {
    pub k0: OperatorMatrix,
    pub k_plus: OperatorMatrix,
    pub k_minus: OperatorMatrix,
    pub y: OperatorMatrix,
    pub v_plus: OperatorMatrix,
    pub v_minus: OperatorMatrix,
    pub w_plus: OperatorMatrix,
    pub w_minus: OperatorMatrix,
    pub gamma: OperatorMatrix,
    pub k0_b: OperatorMatrix,
    pub k_plus_b: OperatorMatrix,
    pub k_minus_b: OperatorMatrix,
    pub q: OperatorMatrix,
    pub q_dag: OperatorMatrix,
    pub hs: OperatorMatrix,
    grid: Grid,
}

/// `b̄_x`, `b̄_y` or their adjoints as node-dependent matrices.
pub fn rotated_fermion(grid: &Grid, mode: Mode, dagger: bool) -> OperatorMatrix {
    let f = FermionAlgebra::new();
    let (bx, by) = if dagger { (f.bx_dag, f.by_dag) } else { (f.bx, f.by) };
    let cos = |_: f64, phi: f64| phi.cos();
    let sin = |_: f64, phi: f64| phi.sin();
    let msin = |_: f64, phi: f64| -phi.sin();
    match mode {
        Mode::X => OperatorMatrix::fermion_field(grid, &[(&cos, bx), (&sin, by)]),
        Mode::Y => OperatorMatrix::fermion_field(grid, &[(&cos, by), (&msin, bx)]),
    }
}

/// The `Γ` coupling of the rotated modes, a `1/r²` matrix field:
/// `(k/2ωr²){a[n̄_x − tan kφ h̄ + (k sec² kφ − 1) n̄_y] + b[n̄_x + cot kφ h̄ + (k csc² kφ − 1) n̄_y]}`
/// with `h̄ = b̄_x†b̄_y + b̄_y†b̄_x`.
fn gamma_matrix(f: &FermionAlgebra, k: f64, a: f64, b: f64, omega: f64, r: f64, phi: f64) -> Matrix4<f64> {
    let (rx, ry) = f.rotated(phi);
    let (rxd, ryd) = (rx.transpose(), ry.transpose());
    let (nx, ny, hop) = (rxd * rx, ryd * ry, rxd * ry + ryd * rx);
    let (s, c) = (k * phi).sin_cos();
    let (tan, cot) = (s / c, c / s);
    let a_part = nx - hop * tan + ny * (k / (c * c) - 1.0);
    let b_part = nx + hop * cot + ny * (k / (s * s) - 1.0);
    (a_part * a + b_part * b) * (k / (2.0 * omega * r * r))
}

impl OspGenerators {
    pub fn new(grid: &Grid) -> Result<Self> {
        let p = *grid.params();
        let (k, a, b, omega) = (p.k, p.a, p.b, p.omega);
        let big_k = k * (a + b);
        let f = FermionAlgebra::new();
        let mult = |h: &(dyn Fn(f64, f64) -> f64 + Sync)| OperatorMatrix::multiplier(grid, 4, h);
        let dr = OperatorMatrix::d_r(grid, 4);
        let dphi = OperatorMatrix::d_phi(grid, 4);

        let hk = strong_operator(&ScalarKind::Hk, grid)?.with_fermions(4)?;
        let r2 = mult(&|r, _| r * r);
        let euler = dr.try_mul(&mult(&|r, _| r))?;
        let k_b = |sg: f64| {
            OperatorMatrix::linear_combination(&[(-1.0, &hk), (2.0 * omega * omega, &r2), (-sg * 2.0 * omega, &euler)])
                .map(|x| x.scale(1.0 / (4.0 * omega)))
        };
        let k0_b = hk.scale(1.0 / (4.0 * omega));
        let (k_plus_b, k_minus_b) = (k_b(1.0)?, k_b(-1.0)?);
        let gamma = OperatorMatrix::fermion_map(grid, |r, phi| gamma_matrix(&f, k, a, b, omega, r, phi));
        let k0 = k0_b.try_add(&gamma)?;
        let k_plus = k_plus_b.try_sub(&gamma)?;
        let k_minus = k_minus_b.try_sub(&gamma)?;
        let y = OperatorMatrix::fermion(grid, &((f.number() - Matrix4::identity() * (big_k + 1.0)) * 0.5));

        let norm = 1.0 / (2.0 * omega.sqrt());
        let wall = |s: f64| mult(&move |_, phi: f64| s * k * (a * (k * phi).tan() - b / (k * phi).tan()));
        let inv_r = mult(&|r, _| 1.0 / r);
        // `∂_φ ± ka tan kφ ∓ kb cot kφ`, then divided by r.
        let angular = |s: f64| -> Result<OperatorMatrix> { inv_r.try_mul(&dphi.try_add(&wall(s))?) };
        let radial = |s: f64, c: f64| -> Result<OperatorMatrix> {
            OperatorMatrix::linear_combination(&[(-s, &dr), (1.0, &mult(&move |r, _| omega * r)), (c, &inv_r)])
        };
        let odd = |dagger: bool, s: f64| -> Result<OperatorMatrix> {
            let (bx, by) = (rotated_fermion(grid, Mode::X, dagger), rotated_fermion(grid, Mode::Y, dagger));
            let (c, w) = if dagger { (s * big_k, 1.0) } else { (-s * big_k, -1.0) };
            let t = OperatorMatrix::linear_combination(&[(1.0, &bx.try_mul(&radial(s, c)?)?), (-s, &by.try_mul(&angular(w)?)?)])?;
            Ok(t.scale(norm))
        };
        let (v_plus, v_minus) = (odd(true, 1.0)?, odd(true, -1.0)?);
        let (w_plus, w_minus) = (odd(false, 1.0)?, odd(false, -1.0)?);
        let hs = k0.try_add(&y)?.scale(4.0 * omega);
        let q = w_plus.scale(2.0 * omega.sqrt());
        let q_dag = v_minus.scale(2.0 * omega.sqrt());
        Ok(Self { k0, k_plus, k_minus, y, v_plus, v_minus, w_plus, w_minus, gamma, k0_b, k_plus_b, k_minus_b, q, q_dag, hs, grid: grid.clone() })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `(𝓗^s, Q, Q†)`.
    pub fn susy_triple(&self) -> (&OperatorMatrix, &OperatorMatrix, &OperatorMatrix) {
        (&self.hs, &self.q, &self.q_dag)
    }

    /// Every generator by its conventional name.
    pub fn named(&self) -> Vec<(&'static str, &OperatorMatrix)> {
        vec![
            ("K0", &self.k0),
            ("K+", &self.k_plus),
            ("K-", &self.k_minus),
            ("Y", &self.y),
            ("V+", &self.v_plus),
            ("V-", &self.v_minus),
            ("W+", &self.w_plus),
            ("W-", &self.w_minus),
            ("Gamma", &self.gamma),
            ("K0B", &self.k0_b),
            ("K+B", &self.k_plus_b),
            ("K-B", &self.k_minus_b),
            ("Q", &self.q),
            ("Q+", &self.q_dag),
            ("Hs", &self.hs),
        ]
    }
}

/// Scalar probes of the form `g·P` (for the ground-state factor `g`) tensored
/// with `|0⟩`, plus their images under `V_+`, `V_−` and `V_+V_−`, each
/// renormalized. This is the span the generators close on: every component
/// stays `g` times a polynomial, so only resolved functions are ever
/// differentiated.
pub fn module_probes(gens: &OspGenerators, scalar: &ProbeSet) -> Result<ProbeSet> {
    let grid = gens.grid();
    let base = scalar.with_vacuum(grid)?;
    let mut labels = base.labels.clone();
    let mut vectors = base.vectors.clone();
    let vm_v = gens.v_minus.apply_all(&base.vectors)?;
    let images = [("V+", gens.v_plus.apply_all(&base.vectors)?), ("V+V-", gens.v_plus.apply_all(&vm_v)?), ("V-", vm_v)];
    for (name, imgs) in images {
        for (l, v) in base.labels.iter().zip(imgs) {
            let n = norm(&v, grid)?;
            if n > 1e-8 {
                labels.push(format!("{name}.{l}"));
                vectors.push(v.into_iter().map(|x| x / n).collect());
            }
        }
    }
    ProbeSet::new(labels, vectors, 4, Smoothness::Generated, grid)
}

/// Radial shift suited to the module probes: every component vanishes at
/// the origin like `r^{k(a+b)}`, and one power is kept in reserve.
pub fn module_radial_shift(p: &ModelParams) -> u32 {
    ((p.k * (p.a + p.b)).floor() as u32).saturating_sub(1)
}

/// Integer `(a, b)` so the ground-state factor is a polynomial.
pub fn integer_couplings(grid: &Grid) -> Result<(u32, u32)> {
    let p = grid.params();
    let int = |x: f64| (x.fract() == 0.0 && x >= 0.0).then_some(x as u32);
    match (int(p.a), int(p.b)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Domain(format!("polynomial probe classes need integer couplings, got a = {}, b = {}", p.a, p.b))),
    }
}

/// Largest angular quantum number whose module stays resolved: the factor
/// `g` carries frequency `k(a+b)`, each `n` adds `2k`, and a bracket on a
/// doubly lifted probe adds up to 6 more, all below `M/2`.
pub fn angular_budget(grid: &Grid) -> Result<u32> {
    let p = grid.params();
    let room = (grid.m() / 2) as f64 - 7.0 - p.k * (p.a + p.b);
    if room < 0.0 {
        return Err(Error::Budget(format!("M = {} cannot resolve the ground-state factor of k(a+b) = {}", grid.m(), p.k * (p.a + p.b))));
    }
    Ok((room / (2.0 * p.k)).floor() as u32)
}

/// Sign-keeping `Ψ_{N,n}` with `N + n <= max_sum`, cut to [`angular_budget`].
pub fn resolved_eigenstates(grid: &Grid, max_sum: u32) -> Result<ProbeSet> {
    integer_couplings(grid)?;
    let n_max = angular_budget(grid)?;
    let eig = ProbeSet::signed_wavefunctions(grid, max_sum)?;
    let keep: Vec<usize> = (0..eig.len()).filter(|&i| eig.labels[i].trim_end_matches(']').rsplit(',').next().and_then(|n| n.parse::<u32>().ok()).is_some_and(|n| n <= n_max)).collect();
    ProbeSet::new(
        keep.iter().map(|&i| eig.labels[i].clone()).collect(),
        keep.iter().map(|&i| eig.vectors[i].clone()).collect(),
        1,
        eig.class,
        grid,
    )
}

/// Default dictionary: exact eigenfunctions with `N + n <= 2` and random
/// invariant-factored functions, both cut to [`angular_budget`], lifted by
/// [`module_probes`].
pub fn default_probes(gens: &OspGenerators) -> Result<ProbeSet> {
    let grid = gens.grid();
    let (a, b) = integer_couplings(grid)?;
    let mut scalar = resolved_eigenstates(grid, 2)?;
    scalar.extend(ProbeSet::invariant_factored(grid, a, b, 2, angular_budget(grid)?, 3, 17)?)?;
    module_probes(gens, &scalar)
}

/// Rayleigh-Ritz values of `𝓗^s` on the span of `probes`, ascending.
///
/// On the module built from eigenstates the span is invariant, so these are
/// eigenvalues of `𝓗^s` rather than bounds.
pub fn ritz_values(g: &OspGenerators, probes: &ProbeSet) -> Result<Vec<f64>> {
    let grid = g.grid();
    let n = probes.len();
    let hv = g.hs.apply_all(&probes.vectors)?;
    let mut gram = DMatrix::zeros(n, n);
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = inner_product(&probes.vectors[i], &probes.vectors[j], grid)?;
            h[(i, j)] = inner_product(&probes.vectors[i], &hv[j], grid)?;
        }
    }
    let h = (&h + h.transpose()) * 0.5;
    let ge = symmetric_eigen(&gram)?;
    let top = ge.values.iter().copied().fold(0.0, f64::max);
    // drop the directions the probes only span to round-off
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&c| ge.values[c] > 1e-10 * top)
        .map(|c| ge.vectors.column(c) / ge.values[c].sqrt())
        .collect();
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let t = DMatrix::from_columns(&cols);
    let reduced = t.transpose() * h * &t;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    Ok(symmetric_eigen(&reduced)?.values.iter().copied().collect())
}

/// One entry of the bracket table: `[A, B] = c·C` (or the anticommutator).
struct Bracket<'a> {
    name: &'static str,
    a: &'a OperatorMatrix,
    b: &'a OperatorMatrix,
    anti: bool,
    rhs: Option<OperatorMatrix>,
}

/// The osp(2|2) table, with the brackets it leaves implicit (vanishing ones
/// among the even part, the odd squares) alongside the listed ones.
pub fn bracket_table(g: &OspGenerators, probes: &ProbeSet, tol: f64) -> Result<Vec<ResidualReport>> {
    let b = |name, a, b, anti, rhs| Bracket { name, a, b, anti, rhs };
    let half = |x: &OperatorMatrix, c: f64| Some(x.scale(c));
    let table = vec![
        b("[K0,K+] = K+", &g.k0, &g.k_plus, false, half(&g.k_plus, 1.0)),
        b("[K0,K-] = -K-", &g.k0, &g.k_minus, false, half(&g.k_minus, -1.0)),
        b("[K+,K-] = -2K0", &g.k_plus, &g.k_minus, false, half(&g.k0, -2.0)),
        b("[K0,V+] = V+/2", &g.k0, &g.v_plus, false, half(&g.v_plus, 0.5)),
        b("[K0,V-] = -V-/2", &g.k0, &g.v_minus, false, half(&g.v_minus, -0.5)),
        b("[K0,W+] = W+/2", &g.k0, &g.w_plus, false, half(&g.w_plus, 0.5)),
        b("[K0,W-] = -W-/2", &g.k0, &g.w_minus, false, half(&g.w_minus, -0.5)),
        b("[K+,V-] = -V+", &g.k_plus, &g.v_minus, false, half(&g.v_plus, -1.0)),
        b("[K-,V+] = V-", &g.k_minus, &g.v_plus, false, half(&g.v_minus, 1.0)),
        b("[K+,W-] = -W+", &g.k_plus, &g.w_minus, false, half(&g.w_plus, -1.0)),
        b("[K-,W+] = W-", &g.k_minus, &g.w_plus, false, half(&g.w_minus, 1.0)),
        b("[Y,V+] = V+/2", &g.y, &g.v_plus, false, half(&g.v_plus, 0.5)),
        b("[Y,V-] = V-/2", &g.y, &g.v_minus, false, half(&g.v_minus, 0.5)),
        b("[Y,W+] = -W+/2", &g.y, &g.w_plus, false, half(&g.w_plus, -0.5)),
        b("[Y,W-] = -W-/2", &g.y, &g.w_minus, false, half(&g.w_minus, -0.5)),
        b("{V+,W+} = K+", &g.v_plus, &g.w_plus, true, half(&g.k_plus, 1.0)),
        b("{V-,W-} = K-", &g.v_minus, &g.w_minus, true, half(&g.k_minus, 1.0)),
        b("{V+,W-} = K0-Y", &g.v_plus, &g.w_minus, true, Some(g.k0.try_sub(&g.y)?)),
        b("{V-,W+} = K0+Y", &g.v_minus, &g.w_plus, true, Some(g.k0.try_add(&g.y)?)),
        b("[K0,Y] = 0", &g.k0, &g.y, false, None),
        b("[K+,Y] = 0", &g.k_plus, &g.y, false, None),
        b("[K-,Y] = 0", &g.k_minus, &g.y, false, None),
        b("[K+,V+] = 0", &g.k_plus, &g.v_plus, false, None),
        b("[K-,V-] = 0", &g.k_minus, &g.v_minus, false, None),
        b("[K+,W+] = 0", &g.k_plus, &g.w_plus, false, None),
        b("[K-,W-] = 0", &g.k_minus, &g.w_minus, false, None),
        b("{V+,V+} = 0", &g.v_plus, &g.v_plus, true, None),
        b("{V-,V-} = 0", &g.v_minus, &g.v_minus, true, None),
        b("{V+,V-} = 0", &g.v_plus, &g.v_minus, true, None),
        b("{W+,W+} = 0", &g.w_plus, &g.w_plus, true, None),
        b("{W-,W-} = 0", &g.w_minus, &g.w_minus, true, None),
        b("{W+,W-} = 0", &g.w_plus, &g.w_minus, true, None),
    ];
    table.into_iter().map(|t| check_bracket(t.name, t.a, t.b, t.anti, t.rhs.as_ref(), probes, tol)).collect()
}

/// `K_±† = K_∓`, `K_0† = K_0`, `Y† = Y`, `V_±† = W_∓` for the quadrature
/// inner product.
pub fn adjoint_pairs(g: &OspGenerators, probes: &ProbeSet, tol: f64) -> Result<Vec<ResidualReport>> {
    [
        ("K0+ = K0", &g.k0, &g.k0),
        ("K++ = K-", &g.k_plus, &g.k_minus),
        ("Y+ = Y", &g.y, &g.y),
        ("V++ = W-", &g.v_plus, &g.w_minus),
        ("V-+ = W+", &g.v_minus, &g.w_plus),
    ]
    .into_iter()
    .map(|(n, a, b)| check_adjoint_pair(n, a, b, probes, tol))
    .collect()
}

/// `{Q, Q†} = 𝓗^s`, `[𝓗^s, Q] = [𝓗^s, Q†] = 0` and `Q² = 0`.
pub fn susy_checks(g: &OspGenerators, probes: &ProbeSet, tol: f64, nilpotent_tol: f64) -> Result<Vec<ResidualReport>> {
    let (hs, q, qd) = g.susy_triple();
    let q2 = q.try_mul(q)?;
    Ok(vec![
        check_bracket("{Q,Q+} = Hs", q, qd, true, Some(hs), probes, tol)?,
        check_bracket("[Hs,Q] = 0", hs, q, false, None, probes, tol)?,
        check_bracket("[Hs,Q+] = 0", hs, qd, false, None, probes, tol)?,
        {
            let amp = amplification(q, probes)?;
            ResidualReport::new("Q^2 = 0", amplification(&q2, probes)?, amp * amp, nilpotent_tol)
        },
    ])
}

/// `‖(A − λ)ψ‖` for a single state, scaled by `max(‖Aψ‖, |λ|, 1)·‖ψ‖`.
fn eigen_report(name: String, op: &OperatorMatrix, psi: &[f64], lambda: f64, grid: &Grid, tol: f64) -> Result<ResidualReport> {
    let apsi = op.apply(psi)?;
    let diff: Vec<f64> = apsi.iter().zip(psi).map(|(x, y)| x - lambda * y).collect();
    let n = norm(psi, grid)?;
    let scale = (norm(&apsi, grid)? / n).max(lambda.abs()).max(1.0);
    Ok(ResidualReport::new(name, norm(&diff, grid)? / n, scale, tol))
}

fn vacuum_state(grid: &Grid, qn: QuantumNumbers) -> Result<Vec<f64>> {
    let probe = ProbeSet::signed_wavefunctions(grid, qn.big_n + qn.n)?;
    let label = format!("psi[{},{}]", qn.big_n, qn.n);
    let idx = probe.labels.iter().position(|l| *l == label).ok_or_else(|| Error::Domain(format!("no probe {label}")))?;
    let mut v = vec![0.0; 4 * grid.nodes()];
    v[..grid.nodes()].copy_from_slice(&probe.vectors[idx]);
    Ok(v)
}

/// `𝓗^s Ψ_{N,n}|0⟩ = 4ω(N + nk) Ψ_{N,n}|0⟩` for `N + n <= max_sum`.
pub fn susy_spectrum_checks(g: &OspGenerators, max_sum: u32, tol: f64) -> Result<Vec<ResidualReport>> {
    let grid = g.grid();
    let p = *grid.params();
    let mut out = Vec::new();
    for s in 0..=max_sum {
        for n in 0..=s {
            let qn = QuantumNumbers { big_n: s - n, n };
            let psi = vacuum_state(grid, qn)?;
            let e = eigen_data(qn, &p).susy_energy;
            out.push(eigen_report(format!("Hs Psi({},{})|0> = {e}", qn.big_n, qn.n), &g.hs, &psi, e, grid, tol)?);
        }
    }
    Ok(out)
}

/// Lowest-weight state: `K_−`, `V_−`, `W_−` annihilate `Ψ_{0,0}|0⟩`, which
/// carries `K_0 = τ`, `Y = q` with `τ + q = 0`.
pub fn lws_check(g: &OspGenerators, tol: f64) -> Result<Vec<ResidualReport>> {
    let grid = g.grid();
    let p = *grid.params();
    let qn = QuantumNumbers { big_n: 0, n: 0 };
    let psi = vacuum_state(grid, qn)?;
    let d = eigen_data(qn, &p);
    let mut out = Vec::new();
    for (name, op) in [("K-", &g.k_minus), ("V-", &g.v_minus), ("W-", &g.w_minus)] {
        let scale = amplification(op, &ProbeSet::new(vec!["lws".into()], vec![psi.clone()], 4, Smoothness::Eigenfunctions, grid)?)?;
        let ref_scale = g.k0.apply(&psi).map(|v| norm(&v, grid))??;
        out.push(ResidualReport::new(format!("{name} Psi(0,0)|0> = 0"), scale, ref_scale, tol));
    }
    out.push(eigen_report(format!("K0 Psi(0,0)|0> = tau = {}", d.tau), &g.k0, &psi, d.tau, grid, tol)?);
    out.push(ResidualReport::new("tau + q = 0", (d.tau + d.q).abs(), d.tau.abs(), tol));
    Ok(out)
}

/// `K_0 = τ(n)` and `Y = q` on `Ψ_{0,n}|0⟩`, for `n <= max_n`.
pub fn weight_checks(g: &OspGenerators, max_n: u32, tol: f64) -> Result<Vec<ResidualReport>> {
    let grid = g.grid();
    let p = *grid.params();
    let mut out = Vec::new();
    for n in 0..=max_n {
        let qn = QuantumNumbers { big_n: 0, n };
        let psi = vacuum_state(grid, qn)?;
        let d = eigen_data(qn, &p);
        out.push(eigen_report(format!("K0 Psi(0,{n})|0> = tau = {}", d.tau), &g.k0, &psi, d.tau, grid, tol)?);
        out.push(eigen_report(format!("Y Psi(0,{n})|0> = q = {}", d.q), &g.y, &psi, d.q, grid, tol)?);
    }
    Ok(out)
}

/// `[∂_φ, b̄_x] = b̄_y` and `[∂_φ, b̄_y] = −b̄_x`, creation and annihilation.
pub fn rotation_checks(grid: &Grid, probes: &ProbeSet, tol: f64) -> Result<Vec<ResidualReport>> {
    let dphi = OperatorMatrix::d_phi(grid, 4);
    let mut out = Vec::new();
    for dagger in [false, true] {
        let (bx, by) = (rotated_fermion(grid, Mode::X, dagger), rotated_fermion(grid, Mode::Y, dagger));
        let t = if dagger { "+" } else { "" };
        out.push(check_bracket(&format!("[dphi,bx{t}] = by{t}"), &dphi, &bx, false, Some(&by), probes, tol)?);
        out.push(check_bracket(&format!("[dphi,by{t}] = -bx{t}"), &dphi, &by, false, Some(&bx.scale(-1.0)), probes, tol)?);
    }
    Ok(out)
}

/// `Y` on zero-fermion states is the constant `q`.
pub fn vacuum_charge_check(g: &OspGenerators, probes: &ProbeSet, tol: f64) -> Result<ResidualReport> {
    let grid = g.grid();
    let q = -0.5 * (grid.params().k * (grid.params().a + grid.params().b) + 1.0);
    let vac = probes.with_vacuum(grid)?;
    let target = OperatorMatrix::identity(grid, 4).scale(q);
    check_equal("Y|0> = q", &g.y, &target, &vac, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridSpec};

    fn gens(k: f64, a: f64, m: usize, nr: usize) -> OspGenerators {
        let p = ModelParams::new(1.0, a, a, k).unwrap();
        let g = build_grid(GridSpec::new(m, nr, p).with_radial_shift(module_radial_shift(&p))).unwrap();
        OspGenerators::new(&g).unwrap()
    }

    #[test]
    fn number_operator_in_fock_order() {
        let f = FermionAlgebra::new();
        assert_eq!(f.ny(), Matrix4::from_diagonal(&nalgebra::Vector4::new(0.0, 0.0, 1.0, 1.0)));
    }

    #[test]
    fn rotated_fields_match_pointwise_rotation() {
        let g = gens(1.0, 1.0, 16, 4);
        let grid = g.grid();
        let f = FermionAlgebra::new();
        let bx = rotated_fermion(grid, Mode::X, false).to_dense();
        let n = grid.nodes();
        for p in [0, 5, n - 1] {
            let (_, phi) = grid.coords(p);
            let (rx, _) = f.rotated(phi);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((bx[(i * n + p, j * n + p)] - rx[(i, j)]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn lws_and_weights_k1() {
        let g = gens(1.0, 1.0, 32, 24);
        for r in lws_check(&g, 1e-7).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        for r in weight_checks(&g, 2, 1e-8).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn anticommutator_closes_on_module() {
        let g = gens(1.0, 1.0, 32, 24);
        let probes = default_probes(&g).unwrap();
        let r = susy_checks(&g, &probes, 1e-8, 1e-10).unwrap();
        assert!(r.iter().all(|x| x.pass), "{r:?}");
    }
}
