//! Collocation differentiation matrices.

use nalgebra::DMatrix;

use super::quadrature::{QuadratureRule, RuleKind};

#[derive(Clone, Debug)]
pub struct DiffMatrix {
    pub entries: DMatrix<f64>,
    pub rule: QuadratureRule,
}

impl DiffMatrix {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.entries.nrows();
        (0..n).map(|i| (0..n).map(|j| self.entries[(i, j)] * v[j]).sum()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.nrows() == 0
    }
}

/// Derivative matrix on the rule's nodes: the spectral cotangent formula for
/// periodic rules, barycentric Lagrange differentiation otherwise.
pub fn diff_matrix(rule: &QuadratureRule) -> DiffMatrix {
    let entries = match rule.kind {
        RuleKind::UniformPeriodic => periodic_entries(rule.len()),
        _ => lagrange_entries(&rule.nodes, |_| 0.0),
    };
    DiffMatrix { entries, rule: rule.clone() }
}

/// Derivative matrix for functions `e^{-c x^2} p(x)` sampled at the nodes,
/// exact when `p` is a polynomial of degree below the node count.
pub fn gaussian_diff_matrix(rule: &QuadratureRule, c: f64) -> DiffMatrix {
    weighted_diff_matrix(rule, c, 0)
}

/// Derivative matrix for functions `x^s e^{-c x^2} p(x)` on positive nodes,
/// exact when `p` is a polynomial of degree below the node count.
pub fn weighted_diff_matrix(rule: &QuadratureRule, c: f64, s: u32) -> DiffMatrix {
    let s = s as f64;
    let mut entries = lagrange_entries(&rule.nodes, |x| if s == 0.0 { -c * x * x } else { s * x.ln() - c * x * x });
    for (i, &x) in rule.nodes.iter().enumerate() {
        entries[(i, i)] += s / x - 2.0 * c * x;
    }
    DiffMatrix { entries, rule: rule.clone() }
}

fn periodic_entries(m: usize) -> DMatrix<f64> {
    let h = 2.0 * std::f64::consts::PI / m as f64;
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            return 0.0;
        }
        let d = i as isize - j as isize;
        let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let x = 0.5 * d as f64 * h;
        if m.is_multiple_of(2) {
            0.5 * sign / x.tan()
        } else {
            0.5 * sign / x.sin()
        }
    })
}

/// `D_ij = (l_j / l_i) * g(x_j) / g(x_i) / (x_i - x_j)`, with the barycentric
/// weights `l` and the (log) weight `log g` combined in log space.
fn lagrange_entries<G: Fn(f64) -> f64>(x: &[f64], log_g: G) -> DMatrix<f64> {
    let n = x.len();
    let mut log_l = vec![0.0; n];
    let mut sign_l = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                let d = x[j] - x[k];
                log_l[j] -= d.abs().ln();
                if d < 0.0 {
                    sign_l[j] = -sign_l[j];
                }
            }
        }
    }
    let lg: Vec<f64> = x.iter().map(|&v| log_g(v)).collect();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let ratio = sign_l[j] * sign_l[i] * (log_l[j] - log_l[i] + lg[i] - lg[j]).exp();
            d[(i, j)] = ratio / (x[i] - x[j]);
            // direct form; the negative-sum trick cancels badly at the outer
            // Gauss nodes, where the unweighted entries are huge
            diag += 1.0 / (x[i] - x[j]);
        }
        d[(i, i)] = diag;
    }
    d
}
