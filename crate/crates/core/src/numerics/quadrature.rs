//! Quadrature rules: uniform periodic, and Gauss rules built by Golub–Welsch
//! from three-term recurrence coefficients.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::eigen::{symmetric_eigen, tridiagonal};
use super::special::{gamma, ln_gamma};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RuleKind {
    /// Offset-uniform nodes `(m + 1/2) 2 pi / M` on `[0, 2 pi)`.
    UniformPeriodic,
    /// Weight `x^alpha e^{-x}` on `(0, inf)`.
    GaussLaguerre { alpha: f64 },
    /// Weight `(1 - x)^alpha (1 + x)^beta` on `(-1, 1)`.
    GaussJacobi { alpha: f64, beta: f64 },
    /// Weight `t^{2s+1} e^{-t^2}` on `(0, inf)`: the radial measure of the
    /// plane with a Gaussian (`s = 0`), exact for polynomials in `t` of
    /// either parity. Larger `s` pushes the nodes off the origin.
    HalfRangeGauss { s: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(x_i)`; the weight function is implied by the rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

pub fn uniform_periodic_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::Domain("periodic rule needs M >= 1".into()));
    }
    let h = 2.0 * PI / m as f64;
    Ok(QuadratureRule {
        kind: RuleKind::UniformPeriodic,
        nodes: (0..m).map(|i| (i as f64 + 0.5) * h).collect(),
        weights: vec![h; m],
    })
}

/// Orthonormal three-term recurrence
/// `x p_l = b_{l+1} p_{l+1} + a_l p_l + b_l p_{l-1}`, `p_0 = 1/sqrt(mu0)`.
/// `diag` holds `a_0..a_{n-1}`, `off` holds `b_1..b_n` (one more than the
/// Jacobi matrix needs, used for Newton refinement of the nodes).
struct Recurrence {
    diag: Vec<f64>,
    off: Vec<f64>,
    mu0: f64,
}

impl Recurrence {
    fn n(&self) -> usize {
        self.diag.len()
    }

    /// `(p_n(x), p_n'(x), sum_{l<n} p_l(x)^2)` with the unnormalized leading
    /// factor removed so that only ratios matter.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.n();
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut christoffel = 0.0;
        for l in 0..n {
            christoffel += p * p;
            let b_prev = if l == 0 { 0.0 } else { self.off[l - 1] };
            let b_next = self.off[l];
            let p_next = ((x - self.diag[l]) * p - b_prev * p_prev) / b_next;
            let d_next = ((x - self.diag[l]) * d + p - b_prev * d_prev) / b_next;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        (p, d, christoffel)
    }

    fn rule(&self, kind: RuleKind) -> Result<QuadratureRule> {
        let n = self.n();
        let jac = tridiagonal(&self.diag, &self.off[..n - 1]);
        let eig = symmetric_eigen(&jac)?;
        let mut nodes: Vec<f64> = eig.values.iter().copied().collect();
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, d, _) = self.eval(*x);
                if d == 0.0 || !d.is_finite() {
                    break;
                }
                let step = p / d;
                if !step.is_finite() {
                    break;
                }
                *x -= step;
                if step.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
        }
        nodes.sort_by(f64::total_cmp);
        // Golub–Welsch weights mu0 v_0^2 written through the eigenvector
        // (p_0(x), ..., p_{n-1}(x)) of the Jacobi matrix.
        let weights = nodes.iter().map(|&x| 1.0 / self.eval(x).2).collect();
        Ok(QuadratureRule { kind, nodes, weights })
    }
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("Gauss rule needs at least one node".into()));
    }
    Ok(())
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if !(v > -1.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be > -1, got {v}")));
    }
    Ok(())
}

pub fn gauss_laguerre_rule(n: usize, alpha: f64) -> Result<QuadratureRule> {
    check_count(n)?;
    check_exponent("alpha", alpha)?;
    let diag = (0..n).map(|j| 2.0 * j as f64 + alpha + 1.0).collect();
    let off = (1..=n).map(|j| (j as f64 * (j as f64 + alpha)).sqrt()).collect();
    Recurrence { diag, off, mu0: gamma(alpha + 1.0) }.rule(RuleKind::GaussLaguerre { alpha })
}

pub fn gauss_jacobi_rule(n: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    check_count(n)?;
    check_exponent("alpha", alpha)?;
    check_exponent("beta", beta)?;
    let ab = alpha + beta;
    let diag = (0..n)
        .map(|j| {
            let s = 2.0 * j as f64 + ab;
            if j == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..=n)
        .map(|j| {
            let jf = j as f64;
            let s = 2.0 * jf + ab;
            let num = 4.0 * jf * (jf + alpha) * (jf + beta) * (jf + ab);
            let den = s * s * (s + 1.0) * (s - 1.0);
            if j == 1 {
                // the general form is 0/0 when alpha + beta = -1
                (4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
            } else {
                (num / den).sqrt()
            }
        })
        .collect();
    let mu0 = ((ab + 1.0) * 2f64.ln() + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(ab + 2.0)).exp();
    Recurrence { diag, off, mu0 }.rule(RuleKind::GaussJacobi { alpha, beta })
}

/// Gauss rule for `t e^{-t^2} dt` on `(0, inf)`.
///
/// Recurrence coefficients come from the discretized Stieltjes procedure on
/// a composite Gauss–Legendre discretization of `[0, T]`; the truncated tail
/// is below the smallest positive double.
pub fn half_range_gauss_rule(n: usize) -> Result<QuadratureRule> {
    shifted_half_range_gauss_rule(n, 0)
}

/// Gauss rule for `t^{2s+1} e^{-t^2}` on `(0, inf)`.
pub fn shifted_half_range_gauss_rule(n: usize, s: u32) -> Result<QuadratureRule> {
    check_count(n)?;
    let power = 2 * s as i32 + 1;
    const PANEL_POINTS: usize = 24;
    let legendre = gauss_jacobi_rule(PANEL_POINTS, 0.0, 0.0)?;
    let t_max = 28.0 + (2.0 * n as f64 + s as f64).sqrt();
    let panels = (2.0 * t_max).ceil() as usize;
    let width = t_max / panels as f64;
    let mut pts = Vec::with_capacity(panels * PANEL_POINTS);
    let mut wts = Vec::with_capacity(panels * PANEL_POINTS);
    for k in 0..panels {
        let left = k as f64 * width;
        for (&x, &w) in legendre.nodes.iter().zip(&legendre.weights) {
            let t = left + 0.5 * width * (x + 1.0);
            pts.push(t);
            wts.push(0.5 * width * w * t.powi(power) * (-t * t).exp());
        }
    }
    let inner = |f: &[f64], g: &[f64]| -> f64 { wts.iter().zip(f).zip(g).map(|((w, a), b)| w * a * b).sum() };

    let mu0 = 0.5 * gamma(s as f64 + 1.0);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    let mut p_prev = vec![0.0; pts.len()];
    let mut p: Vec<f64> = vec![1.0 / mu0.sqrt(); pts.len()];
    let mut b_prev = 0.0;
    for _ in 0..=n {
        let tp: Vec<f64> = pts.iter().zip(&p).map(|(t, v)| t * v).collect();
        let a = inner(&tp, &p);
        let mut next: Vec<f64> = tp.iter().zip(&p).zip(&p_prev).map(|((tv, v), vp)| tv - a * v - b_prev * vp).collect();
        let b = inner(&next, &next).sqrt();
        next.iter_mut().for_each(|v| *v /= b);
        if diag.len() < n {
            diag.push(a);
        }
        off.push(b);
        if off.len() == n {
            break;
        }
        p_prev = std::mem::replace(&mut p, next);
        b_prev = b;
    }
    Recurrence { diag, off, mu0 }.rule(RuleKind::HalfRangeGauss { s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_small_rules() {
        let r = gauss_laguerre_rule(1, 0.0).unwrap();
        assert!((r.nodes[0] - 1.0).abs() < 1e-15 && (r.weights[0] - 1.0).abs() < 1e-15);
        let r = gauss_laguerre_rule(2, 0.0).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.nodes[0] - (2.0 - s2)).abs() < 1e-14);
        assert!((r.nodes[1] - (2.0 + s2)).abs() < 1e-14);
    }

    #[test]
    fn laguerre_moments() {
        for &(n, alpha) in &[(8usize, 0.0), (20, 0.5), (32, 3.0), (48, 12.0)] {
            let r = gauss_laguerre_rule(n, alpha).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            for j in 0..(2 * n) {
                let want = gamma(j as f64 + alpha + 1.0);
                let got = r.integrate(|x| x.powi(j as i32));
                assert!(((got - want) / want).abs() <= 1e-12, "n={n} a={alpha} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn jacobi_moments() {
        for &(n, a, b) in &[(6usize, 0.5, 1.5), (12, -0.5, -0.5), (10, 1.5, 3.5)] {
            let r = gauss_jacobi_rule(n, a, b).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            // oracle: a much finer rule of the same family
            let fine = gauss_jacobi_rule(4 * n, a, b).unwrap();
            for j in 0..(2 * n) {
                let got = r.integrate(|x| x.powi(j as i32));
                let want = fine.integrate(|x| x.powi(j as i32));
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "j={j}");
            }
        }
        // Chebyshev: nodes cos((2i-1)pi/2n), equal weights pi/n
        let r = gauss_jacobi_rule(5, -0.5, -0.5).unwrap();
        for (i, x) in r.nodes.iter().rev().enumerate() {
            let want = ((2 * i + 1) as f64 * PI / 10.0).cos();
            assert!((x - want).abs() < 1e-14);
        }
        assert!(r.weights.iter().all(|w| (w - PI / 5.0).abs() < 1e-13));
    }

    #[test]
    fn half_range_moments() {
        for &n in &[4usize, 16, 32, 48] {
            let r = half_range_gauss_rule(n).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|w| 0.0 < w[0] && w[0] < w[1]));
            // int_0^inf t^j t e^{-t^2} dt = Gamma(j/2 + 1) / 2
            for j in 0..(2 * n) {
                let want = 0.5 * gamma(j as f64 / 2.0 + 1.0);
                let got = r.integrate(|t| t.powi(j as i32));
                assert!(((got - want) / want).abs() <= 1e-12, "n={n} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn shifted_half_range_moments() {
        for &(n, s) in &[(8usize, 3u32), (32, 6), (40, 10)] {
            let r = shifted_half_range_gauss_rule(n, s).unwrap();
            for j in 0..(2 * n) {
                let want = 0.5 * gamma((j as f64 + 2.0 * s as f64) / 2.0 + 1.0);
                let got = r.integrate(|t| t.powi(j as i32));
                assert!(((got - want) / want).abs() <= 1e-12, "n={n} s={s} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn periodic_rule() {
        let r = uniform_periodic_rule(16).unwrap();
        assert!(r.weights.iter().all(|&w| (w - 2.0 * PI / 16.0).abs() < 1e-16));
        let got = r.integrate(|x| (3.0 * x).cos().powi(2));
        assert!((got - PI).abs() < 1e-13);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(gauss_laguerre_rule(0, 0.0).is_err());
        assert!(gauss_laguerre_rule(3, -1.0).is_err());
        assert!(uniform_periodic_rule(0).is_err());
    }
}
