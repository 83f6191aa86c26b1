//! Closed-form spectrum, eigenfunctions and weights of the TTW system and
//! its supersymmetric extension.

use serde::{Deserialize, Serialize};

use crate::numerics::{gauss_jacobi_rule, gauss_laguerre_rule, jacobi, laguerre, ln_gamma};
use crate::{Error, Result};

/// Oscillator frequency, couplings and deformation parameter of `H_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

impl ModelParams {
    /// Checked constructor; couplings must lie in the default window `a, b > 1/2`.
    pub fn new(omega: f64, a: f64, b: f64, k: f64) -> Result<Self> {
        let p = Self { omega, a, b, k };
        p.validate()?;
        Ok(p)
    }

    /// Like [`ModelParams::new`] but only requires `a, b >= 0`. Wedge-edge
    /// behaviour is then rougher and the tight tolerances no longer apply.
    pub fn relaxed(omega: f64, a: f64, b: f64, k: f64) -> Result<Self> {
        let p = Self { omega, a, b, k };
        p.validate_basic()?;
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::Domain(format!("couplings must be non-negative, got a = {a}, b = {b}")));
        }
        Ok(p)
    }

    fn validate_basic(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::Domain(format!("omega must be positive, got {}", self.omega)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Domain(format!("k must be positive, got {}", self.k)));
        }
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::Domain("couplings must be finite".into()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_basic()?;
        if !(self.a > 0.5 && self.b > 0.5) {
            return Err(Error::Domain(format!(
                "couplings outside the admissible window a, b > 1/2: a = {}, b = {}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// `k` as a positive integer, if it is one.
    pub fn integer_k(&self) -> Result<usize> {
        let r = self.k.round();
        if (self.k - r).abs() > 1e-12 || r < 1.0 {
            return Err(Error::Domain(format!("integer k required, got {}", self.k)));
        }
        Ok(r as usize)
    }

    /// `k` as an odd positive integer (Dunkl construction).
    pub fn odd_k(&self) -> Result<usize> {
        let k = self.integer_k().map_err(|_| Error::EvenK(self.k))?;
        if k % 2 == 0 {
            return Err(Error::EvenK(self.k));
        }
        Ok(k)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { omega: 1.0, a: 2.0, b: 2.0, k: 3.0 }
    }
}

/// Radial number `N` and angular number `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    #[serde(rename = "N")]
    pub big_n: u32,
    pub n: u32,
}

impl QuantumNumbers {
    pub const fn new(big_n: u32, n: u32) -> Self {
        Self { big_n, n }
    }
}

/// `E_{N,n} = 2ω[2N + (2n+a+b)k + 1]`.
pub fn energy(qn: QuantumNumbers, p: &ModelParams) -> f64 {
    2.0 * p.omega * (2.0 * qn.big_n as f64 + (2.0 * qn.n as f64 + p.a + p.b) * p.k + 1.0)
}

/// Supersymmetric level `4ω(N + nk)`, i.e. `E_{N,n} - E_{0,0}`.
pub fn susy_energy(qn: QuantumNumbers, p: &ModelParams) -> f64 {
    4.0 * p.omega * (qn.big_n as f64 + qn.n as f64 * p.k)
}

/// Eigenvalue of `X_k` on `Φ_n`: the separation constant `k²(2n+a+b)²`.
pub fn angular_eigenvalue(n: u32, p: &ModelParams) -> f64 {
    let mu = (2.0 * n as f64 + p.a + p.b) * p.k;
    mu * mu
}

/// Number of pairs `(N, n)` with `N + nk = m`.
pub fn degeneracy(m: u32, k: u32) -> Result<u32> {
    if k == 0 {
        return Err(Error::Domain("k must be a positive integer".into()));
    }
    Ok(m / k + 1)
}

/// Weights `(τ, q)` of `K_0` and `Y` on `Ψ_{N,n}|0⟩`.
pub fn weight_eigenvalues(n: u32, p: &ModelParams) -> (f64, f64) {
    let tau = (n as f64 + 0.5 * (p.a + p.b)) * p.k + 0.5;
    let q = -0.5 * ((p.a + p.b) * p.k + 1.0);
    (tau, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    pub qn: QuantumNumbers,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "Esusy")]
    pub susy_energy: f64,
    pub tau: f64,
    pub q: f64,
}

pub fn eigen_data(qn: QuantumNumbers, p: &ModelParams) -> EigenData {
    let (tau, q) = weight_eigenvalues(qn.n, p);
    EigenData { qn, energy: energy(qn, p), susy_energy: susy_energy(qn, p), tau, q }
}

/// Levels with `N + nk <= max_level` (integer k), ascending by energy then `n`.
pub fn levels(p: &ModelParams, max_level: u32) -> Result<Vec<EigenData>> {
    let k = p.integer_k()? as u32;
    let mut out = Vec::new();
    for n in 0..=max_level / k {
        for big_n in 0..=(max_level - n * k) {
            out.push(eigen_data(QuantumNumbers::new(big_n, n), p));
        }
    }
    out.sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.qn.n.cmp(&y.qn.n)));
    Ok(out)
}

/// Describes the normalized `Ψ_{N,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSpec {
    pub params: ModelParams,
    pub qn: QuantumNumbers,
    pub norm: f64,
}

impl WavefunctionSpec {
    /// Unit normalization constant 1 (raw product of the radial and angular factors).
    pub fn unnormalized(params: ModelParams, qn: QuantumNumbers) -> Self {
        Self { params, qn, norm: 1.0 }
    }

    /// Normalization fixed by wedge quadrature.
    pub fn normalized(params: ModelParams, qn: QuantumNumbers) -> Result<Self> {
        let s = wedge_overlap(&params, qn, qn)?;
        Ok(Self { params, qn, norm: 1.0 / s.sqrt() })
    }

    /// Radial factor `Z_N` at radius `r`.
    pub fn radial(&self, r: f64) -> f64 {
        let p = &self.params;
        let alpha = (2.0 * self.qn.n as f64 + p.a + p.b) * p.k;
        let z = p.omega * r * r;
        let lag = crate::numerics::special::laguerre_unchecked(self.qn.big_n as usize, alpha, z);
        if r == 0.0 {
            return if alpha == 0.0 { lag } else { 0.0 };
        }
        // (z/ω)^{α/2} = r^α, combined with the Gaussian in log space
        (alpha * r.ln() - 0.5 * z).exp() * lag
    }

    /// Angular factor, extended symmetrically to the whole circle as
    /// `|cos kφ|^a |sin kφ|^b P_n(ξ)`.
    pub fn angular(&self, phi: f64) -> f64 {
        let p = &self.params;
        let (s, c) = (p.k * phi).sin_cos();
        let xi = -(2.0 * p.k * phi).cos();
        let jac = crate::numerics::special::jacobi_unchecked(self.qn.n as usize, p.a - 0.5, p.b - 0.5, xi);
        c.abs().powf(p.a) * s.abs().powf(p.b) * jac
    }

    /// Extension with the signs of `cos^a kφ sin^b kφ` kept, for integer
    /// `a, b`: a polynomial times the Gaussian, smooth on the whole plane
    /// even when `a` or `b` is odd.
    pub fn eval_signed(&self, r: f64, phi: f64) -> Result<f64> {
        let p = &self.params;
        if p.a.fract() != 0.0 || p.b.fract() != 0.0 {
            return Err(Error::Domain(format!("signed extension needs integer couplings, got a = {}, b = {}", p.a, p.b)));
        }
        let (s, c) = (p.k * phi).sin_cos();
        let xi = -(2.0 * p.k * phi).cos();
        let jac = crate::numerics::special::jacobi_unchecked(self.qn.n as usize, p.a - 0.5, p.b - 0.5, xi);
        Ok(self.norm * self.radial(r) * c.powi(p.a as i32) * s.powi(p.b as i32) * jac)
    }

    /// Symmetric extension of `Ψ_{N,n}` to the whole plane.
    pub fn eval_extended(&self, r: f64, phi: f64) -> f64 {
        self.norm * self.radial(r) * self.angular(phi)
    }
}

/// `Ψ_{N,n}(r, φ)` on the wedge `0 <= φ <= π/2k`.
pub fn wavefunction_eval(spec: &WavefunctionSpec, r: f64, phi: f64) -> Result<f64> {
    let edge = std::f64::consts::FRAC_PI_2 / spec.params.k;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
    }
    if !(0.0..=edge).contains(&phi) {
        return Err(Error::Domain(format!("phi = {phi} outside the wedge [0, {edge}]")));
    }
    // validate the polynomial parameters once here
    let p = &spec.params;
    laguerre(spec.qn.big_n as usize, (2.0 * spec.qn.n as f64 + p.a + p.b) * p.k, 0.0)?;
    jacobi(spec.qn.n as usize, p.a - 0.5, p.b - 0.5, 0.0)?;
    Ok(spec.eval_extended(r, phi))
}

/// `∫_0^∞ r dr ∫_0^{π/2k} dφ` of the product of two unnormalized
/// wavefunctions, by Gauss–Laguerre in `z = ωr²` and Gauss–Jacobi in `ξ`.
/// Both rules carry the exact singular weights, so the result is exact up to
/// round-off for any admissible real `a, b`.
pub fn wedge_overlap(p: &ModelParams, u: QuantumNumbers, v: QuantumNumbers) -> Result<f64> {
    let (alpha_u, alpha_v) = (radial_exponent(p, u.n), radial_exponent(p, v.n));
    let alpha = 0.5 * (alpha_u + alpha_v);
    let nz = ((u.big_n + v.big_n) / 2 + 2) as usize;
    let gl = gauss_laguerre_rule(nz, alpha)?;
    let radial: f64 = gl
        .nodes
        .iter()
        .zip(&gl.weights)
        .map(|(&z, &w)| w * laguerre(u.big_n as usize, alpha_u, z).unwrap() * laguerre(v.big_n as usize, alpha_v, z).unwrap())
        .sum::<f64>()
        * (-alpha * p.omega.ln()).exp()
        / (2.0 * p.omega);

    let (ja, jb) = (p.a - 0.5, p.b - 0.5);
    let nxi = ((u.n + v.n) / 2 + 2) as usize;
    let gj = gauss_jacobi_rule(nxi, ja, jb)?;
    let angular: f64 = gj
        .nodes
        .iter()
        .zip(&gj.weights)
        .map(|(&x, &w)| w * jacobi(u.n as usize, ja, jb, x).unwrap() * jacobi(v.n as usize, ja, jb, x).unwrap())
        .sum::<f64>()
        * (-(p.a + p.b) * std::f64::consts::LN_2).exp()
        / (2.0 * p.k);
    Ok(radial * angular)
}

/// Gram matrix of the normalized wavefunctions with `N + n <= max_sum`,
/// in the order returned alongside it.
pub fn wedge_gram(p: &ModelParams, max_sum: u32) -> Result<(Vec<QuantumNumbers>, Vec<Vec<f64>>)> {
    let qns: Vec<QuantumNumbers> =
        (0..=max_sum).flat_map(|s| (0..=s).map(move |n| QuantumNumbers::new(s - n, n))).collect();
    let norms = qns
        .iter()
        .map(|&q| WavefunctionSpec::normalized(*p, q).map(|s| s.norm))
        .collect::<Result<Vec<_>>>()?;
    let mut g = vec![vec![0.0; qns.len()]; qns.len()];
    for i in 0..qns.len() {
        for j in 0..qns.len() {
            g[i][j] = norms[i] * norms[j] * wedge_overlap(p, qns[i], qns[j])?;
        }
    }
    Ok((qns, g))
}

fn radial_exponent(p: &ModelParams, n: u32) -> f64 {
    (2.0 * n as f64 + p.a + p.b) * p.k
}

/// Closed-form squared norm of the unnormalized `Ψ_{N,n}` on the wedge, from
/// the Laguerre and Jacobi norms. Cross-check for [`wedge_overlap`].
pub fn norm_squared_closed_form(p: &ModelParams, qn: QuantumNumbers) -> f64 {
    let alpha = radial_exponent(p, qn.n);
    let big_n = qn.big_n as f64;
    let ln_radial = ln_gamma(big_n + alpha + 1.0) - ln_gamma(big_n + 1.0) - alpha * p.omega.ln() - (2.0 * p.omega).ln();
    let (ja, jb) = (p.a - 0.5, p.b - 0.5);
    let n = qn.n as f64;
    let s = 2.0 * n + ja + jb + 1.0;
    let ln_jac = (ja + jb + 1.0) * std::f64::consts::LN_2 - s.ln() + ln_gamma(n + ja + 1.0) + ln_gamma(n + jb + 1.0)
        - ln_gamma(n + ja + jb + 1.0)
        - ln_gamma(n + 1.0);
    let ln_ang = ln_jac - (p.a + p.b) * std::f64::consts::LN_2 - (2.0 * p.k).ln();
    (ln_radial + ln_ang).exp()
}
