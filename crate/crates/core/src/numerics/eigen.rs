//! Dense symmetric eigensolver: cyclic Jacobi rotations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 60;

#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: DVector<f64>,
    /// Column `i` is the unit eigenvector of `values[i]`.
    pub vectors: DMatrix<f64>,
}

pub fn symmetry_defect(a: &DMatrix<f64>) -> f64 {
    let scale = a.amax();
    if scale == 0.0 {
        return 0.0;
    }
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Eigen-decomposition of a real symmetric matrix.
///
/// Input is accepted when its relative asymmetry is at most `1e-10`; the
/// symmetric part is what gets diagonalized.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<SymmetricEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension { expected: n, got: a.ncols() });
    }
    let defect = symmetry_defect(a);
    if defect > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(defect));
    }
    // row-major working copy of the symmetric part
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    // rows of `v` are the eigenvectors (kept contiguous for the rotation updates)
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    jacobi_sweeps(&mut m, &mut v, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| m[i * n + i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = v[i * n + r];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

fn off_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += m[i * n + j] * m[i * n + j];
        }
    }
    (2.0 * s).sqrt()
}

fn jacobi_sweeps(m: &mut [f64], v: &mut [f64], n: usize) {
    let total: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if total == 0.0 {
        return;
    }
    for _ in 0..MAX_SWEEPS {
        let off = off_norm(m, n);
        if off <= f64::EPSILON * 1e-2 * total {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // skip rotations that cannot change the diagonal in floating point
                if apq.abs() < 1e-3 * f64::EPSILON * (app.abs() + aqq.abs()).max(f64::MIN_POSITIVE) {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    let nkp = c * akp - s * akq;
                    let nkq = s * akp + c * akq;
                    m[k * n + p] = nkp;
                    m[p * n + k] = nkp;
                    m[k * n + q] = nkq;
                    m[q * n + k] = nkq;
                }
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                let (vp, vq) = rows_mut(v, n, p, q);
                for k in 0..n {
                    let a = vp[k];
                    let b = vq[k];
                    vp[k] = c * a - s * b;
                    vq[k] = s * a + c * b;
                }
            }
        }
    }
}

fn rows_mut(v: &mut [f64], n: usize, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let (head, tail) = v.split_at_mut(q * n);
    (&mut head[p * n..(p + 1) * n], &mut tail[..n])
}

/// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
pub fn tridiagonal(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
    let n = diag.len();
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = diag[i];
        if i + 1 < n {
            t[(i, i + 1)] = off[i];
            t[(i + 1, i)] = off[i];
        }
    }
    t
}
