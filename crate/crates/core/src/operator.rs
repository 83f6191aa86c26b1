//! Operators on grid vectors.
//!
//! Everything built here is a composite of a few primitives (multipliers,
//! the ray and ring derivatives, angular permutations, constant or
//! node-dependent fermion matrices) and is applied matrix-free. A dense
//! matrix for a fermion-tensored operator at reference resolution would run
//! to hundreds of megabytes, while applying the structured form costs a few
//! small matrix products. [`OperatorMatrix::to_dense`] materialises the
//! matrix when one is actually needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix4};

use crate::grid::Grid;
use crate::par;
use crate::{Error, Result};

/// Whether the matrix acts on plain samples or on `√w`-scaled samples, i.e.
/// whether it is `A` or `W^{1/2} A W^{-1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    Nodal,
    Symmetric,
}

#[derive(Clone, Debug)]
enum Expr {
    Identity,
    /// Scalar multiplier, one value per scalar node.
    Diag(Arc<Vec<f64>>),
    /// Constant `F x F` matrix on the fermion index, row-major.
    Fermion(Arc<Vec<f64>>),
    /// Node-dependent `F x F` matrix, `[node][row][col]`.
    FermionField(Arc<Vec<f64>>),
    /// `(P v)_m = v_{perm[m]}` on every ring.
    Perm(Arc<Vec<usize>>),
    /// Matrix acting along each ray (`Nr x Nr`).
    Radial(Arc<DMatrix<f64>>),
    /// Matrix acting along each ring (`M x M`).
    Angular(Arc<DMatrix<f64>>),
    Dense(Arc<DMatrix<f64>>),
    Sum(Vec<(f64, Arc<Expr>)>),
    /// Factors applied right to left.
    Product(Vec<Arc<Expr>>),
    /// `scale * Σ_w F_{w[0]} F_{w[1]} ...` over the listed words; terms are
    /// independent and summed in word order.
    Words { factors: Vec<Arc<Expr>>, words: Arc<Vec<Vec<usize>>>, scale: f64 },
}

#[derive(Clone)]
pub struct OperatorMatrix {
    grid: Grid,
    fermions: usize,
    gauge: Gauge,
    expr: Arc<Expr>,
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorMatrix")
            .field("dim", &self.dim())
            .field("fermions", &self.fermions)
            .field("gauge", &self.gauge)
            .finish()
    }
}

impl OperatorMatrix {
    fn wrap(grid: &Grid, fermions: usize, expr: Expr) -> Self {
        Self { grid: grid.clone(), fermions, gauge: Gauge::Nodal, expr: Arc::new(expr) }
    }

    pub fn identity(grid: &Grid, fermions: usize) -> Self {
        Self::wrap(grid, fermions, Expr::Identity)
    }

    pub fn zero(grid: &Grid, fermions: usize) -> Self {
        Self::wrap(grid, fermions, Expr::Sum(Vec::new()))
    }

    /// Multiplication by a scalar field given by its samples.
    pub fn diag(grid: &Grid, fermions: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::Dimension { expected: grid.nodes(), got: values.len() });
        }
        Ok(Self::wrap(grid, fermions, Expr::Diag(Arc::new(values))))
    }

    /// Multiplication by `f(r, φ)`.
    pub fn multiplier<F: Fn(f64, f64) -> f64 + Sync>(grid: &Grid, fermions: usize, f: F) -> Self {
        Self::wrap(grid, fermions, Expr::Diag(Arc::new(grid.sample(f))))
    }

    /// Constant matrix on the 4-dimensional Fock space.
    pub fn fermion(grid: &Grid, m: &Matrix4<f64>) -> Self {
        let rows: Vec<f64> = (0..16).map(|i| m[(i / 4, i % 4)]).collect();
        Self::wrap(grid, 4, Expr::Fermion(Arc::new(rows)))
    }

    /// `Σ_l f_l(r, φ) C_l` for constant Fock-space matrices `C_l`.
    pub fn fermion_field(grid: &Grid, terms: &[(&dyn Fn(f64, f64) -> f64, Matrix4<f64>)]) -> Self {
        let n = grid.nodes();
        let mut data = vec![0.0; 16 * n];
        for (f, c) in terms {
            for p in 0..n {
                let (r, phi) = grid.coords(p);
                let v = f(r, phi);
                for e in 0..16 {
                    data[16 * p + e] += v * c[(e / 4, e % 4)];
                }
            }
        }
        Self::wrap(grid, 4, Expr::FermionField(Arc::new(data)))
    }

    /// Node-dependent Fock-space matrix `m(r, φ)`.
    pub fn fermion_map<F: Fn(f64, f64) -> Matrix4<f64>>(grid: &Grid, m: F) -> Self {
        let mut data = Vec::with_capacity(16 * grid.nodes());
        for p in 0..grid.nodes() {
            let (r, phi) = grid.coords(p);
            let c = m(r, phi);
            data.extend((0..16).map(|e| c[(e / 4, e % 4)]));
        }
        Self::wrap(grid, 4, Expr::FermionField(Arc::new(data)))
    }

    /// Angular permutation `(P v)_m = v_{perm[m]}`.
    pub fn permutation(grid: &Grid, fermions: usize, perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; grid.m()];
        if perm.len() != grid.m() || !perm.iter().all(|&p| p < grid.m() && !std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Grid("not a permutation of the angular index".into()));
        }
        Ok(Self::wrap(grid, fermions, Expr::Perm(Arc::new(perm))))
    }

    /// `∂_r` along each ray.
    pub fn d_r(grid: &Grid, fermions: usize) -> Self {
        Self::wrap(grid, fermions, Expr::Radial(Arc::new(grid.d_r.clone())))
    }

    /// `∂_φ` on each ring.
    pub fn d_phi(grid: &Grid, fermions: usize) -> Self {
        Self::wrap(grid, fermions, Expr::Angular(Arc::new(grid.d_phi.clone())))
    }

    /// Wraps an explicit matrix (in the given gauge).
    pub fn dense(grid: &Grid, fermions: usize, gauge: Gauge, m: DMatrix<f64>) -> Result<Self> {
        let dim = grid.nodes() * fermions;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Dimension { expected: dim, got: m.nrows() });
        }
        Ok(Self { grid: grid.clone(), fermions, gauge, expr: Arc::new(Expr::Dense(Arc::new(m))) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn fermions(&self) -> usize {
        self.fermions
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn dim(&self) -> usize {
        self.grid.nodes() * self.fermions
    }

    /// Same operator, reinterpreted in the requested gauge.
    pub fn in_gauge(&self, gauge: Gauge) -> Self {
        if gauge == self.gauge {
            return self.clone();
        }
        let w = &self.grid.sqrt_weights;
        let (left, right): (Vec<f64>, Vec<f64>) = match gauge {
            Gauge::Symmetric => (w.clone(), w.iter().map(|x| 1.0 / x).collect()),
            Gauge::Nodal => (w.iter().map(|x| 1.0 / x).collect(), w.clone()),
        };
        let expr = Expr::Product(vec![Arc::new(Expr::Diag(Arc::new(left))), self.expr.clone(), Arc::new(Expr::Diag(Arc::new(right)))]);
        Self { grid: self.grid.clone(), fermions: self.fermions, gauge, expr: Arc::new(expr) }
    }

    pub fn symmetric(&self) -> Self {
        self.in_gauge(Gauge::Symmetric)
    }

    /// Literal transpose of the matrix in its own gauge.
    pub fn transpose(&self) -> Self {
        Self { expr: Arc::new(transpose(&self.expr)), ..self.clone() }
    }

    /// Adjoint for the quadrature inner product. In the symmetric gauge this
    /// is the transpose.
    pub fn adjoint(&self) -> Self {
        match self.gauge {
            Gauge::Symmetric => self.transpose(),
            Gauge::Nodal => self.symmetric().transpose().in_gauge(Gauge::Nodal),
        }
    }

    /// Lifts a scalar operator to act identically on every Fock component.
    pub fn with_fermions(&self, fermions: usize) -> Result<Self> {
        if self.fermions == fermions {
            return Ok(self.clone());
        }
        if self.fermions != 1 || contains_dense(&self.expr) {
            return Err(Error::Dimension { expected: 1, got: self.fermions });
        }
        Ok(Self { fermions, ..self.clone() })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.gauge != other.gauge {
            return Err(Error::GaugeMismatch);
        }
        if self.fermions != other.fermions || self.grid != other.grid {
            return Err(Error::Dimension { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(vec![(1.0, self.expr.clone()), (1.0, other.expr.clone())]))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.combine(vec![(1.0, self.expr.clone()), (-1.0, other.expr.clone())]))
    }

    /// Operator product `self * other` (apply `other` first).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { expr: Arc::new(Expr::Product(vec![self.expr.clone(), other.expr.clone()])), ..self.clone() })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.combine(vec![(s, self.expr.clone())])
    }

    fn combine(&self, terms: Vec<(f64, Arc<Expr>)>) -> Self {
        Self { expr: Arc::new(Expr::Sum(terms)), ..self.clone() }
    }

    /// `Σ c_i A_i` over operators sharing grid, gauge and fermion factor.
    pub fn linear_combination(terms: &[(f64, &OperatorMatrix)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Domain("empty linear combination".into()))?.1;
        for (_, t) in terms {
            first.check(t)?;
        }
        Ok(first.combine(terms.iter().map(|(c, t)| (*c, t.expr.clone())).collect()))
    }

    /// `scale * Σ_w ops[w_0] ops[w_1] ...`, each word applied right to left.
    pub fn word_sum(ops: &[OperatorMatrix], words: Vec<Vec<usize>>, scale: f64) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::Domain("no factors".into()))?;
        for o in ops {
            first.check(o)?;
        }
        if words.iter().flatten().any(|&i| i >= ops.len()) {
            return Err(Error::Domain("word refers to a missing factor".into()));
        }
        let expr = Expr::Words { factors: ops.iter().map(|o| o.expr.clone()).collect(), words: Arc::new(words), scale };
        Ok(Self { expr: Arc::new(expr), ..first.clone() })
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }

    /// Matrix-vector product in the operator's own gauge.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: v.len() });
        }
        Ok(apply(&self.expr, v, &Ctx { grid: &self.grid }))
    }

    /// Apply to many vectors, in parallel when enabled.
    pub fn apply_all(&self, vs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        par::map_collect(vs, |v| self.apply(v)).into_iter().collect()
    }

    /// Dense matrix in the operator's gauge, built column by column.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let cols: Vec<usize> = (0..n).collect();
        let columns = par::map_collect(&cols, |&j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            apply(&self.expr, &e, &Ctx { grid: &self.grid })
        });
        DMatrix::from_fn(n, n, |i, j| columns[j][i])
    }

    /// `B^T A B` for a matrix `B` whose columns live in this operator's space.
    pub fn restrict(&self, basis: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if basis.nrows() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: basis.nrows() });
        }
        let cols: Vec<Vec<f64>> = basis.column_iter().map(|c| c.iter().copied().collect()).collect();
        let images = self.apply_all(&cols)?;
        let mut ab = DMatrix::zeros(self.dim(), basis.ncols());
        for (j, img) in images.iter().enumerate() {
            ab.set_column(j, &DVector::from_column_slice(img));
        }
        Ok(basis.transpose() * ab)
    }
}

fn contains_dense(e: &Expr) -> bool {
    match e {
        Expr::Dense(_) | Expr::Fermion(_) | Expr::FermionField(_) => true,
        Expr::Sum(t) => t.iter().any(|(_, x)| contains_dense(x)),
        Expr::Product(t) => t.iter().any(|x| contains_dense(x)),
        Expr::Words { factors, .. } => factors.iter().any(|x| contains_dense(x)),
        _ => false,
    }
}

fn transpose(e: &Expr) -> Expr {
    match e {
        Expr::Identity | Expr::Diag(_) => e.clone(),
        Expr::Fermion(c) => Expr::Fermion(Arc::new(transpose_blocks(c, 1))),
        Expr::FermionField(c) => Expr::FermionField(Arc::new(transpose_blocks(c, c.len() / 16))),
        Expr::Perm(p) => {
            let mut inv = vec![0; p.len()];
            for (m, &q) in p.iter().enumerate() {
                inv[q] = m;
            }
            Expr::Perm(Arc::new(inv))
        }
        Expr::Radial(d) => Expr::Radial(Arc::new(d.transpose())),
        Expr::Angular(d) => Expr::Angular(Arc::new(d.transpose())),
        Expr::Dense(d) => Expr::Dense(Arc::new(d.transpose())),
        Expr::Sum(t) => Expr::Sum(t.iter().map(|(c, x)| (*c, Arc::new(transpose(x)))).collect()),
        Expr::Product(t) => Expr::Product(t.iter().rev().map(|x| Arc::new(transpose(x))).collect()),
        Expr::Words { factors, words, scale } => Expr::Words {
            factors: factors.iter().map(|x| Arc::new(transpose(x))).collect(),
            words: Arc::new(words.iter().map(|w| w.iter().rev().copied().collect()).collect()),
            scale: *scale,
        },
    }
}

fn transpose_blocks(c: &[f64], blocks: usize) -> Vec<f64> {
    let mut out = vec![0.0; c.len()];
    for b in 0..blocks {
        for i in 0..4 {
            for j in 0..4 {
                out[16 * b + 4 * i + j] = c[16 * b + 4 * j + i];
            }
        }
    }
    out
}

struct Ctx<'a> {
    grid: &'a Grid,
}

fn apply(e: &Expr, v: &[f64], ctx: &Ctx<'_>) -> Vec<f64> {
    let (m, nr, n) = (ctx.grid.m(), ctx.grid.nr(), ctx.grid.nodes());
    match e {
        Expr::Identity => v.to_vec(),
        Expr::Diag(d) => {
            let mut out = v.to_vec();
            par::for_each_chunk(&mut out, m, |line, chunk| {
                let base = (line * m) % n;
                for (x, w) in chunk.iter_mut().zip(&d[base..base + m]) {
                    *x *= w;
                }
            });
            out
        }
        Expr::Fermion(c) => {
            let mut out = vec![0.0; v.len()];
            par::for_each_chunk(&mut out, n, |row, chunk| {
                for col in 0..4 {
                    let s = c[4 * row + col];
                    if s != 0.0 {
                        for (x, y) in chunk.iter_mut().zip(&v[col * n..(col + 1) * n]) {
                            *x += s * y;
                        }
                    }
                }
            });
            out
        }
        Expr::FermionField(c) => {
            let mut out = vec![0.0; v.len()];
            par::for_each_chunk(&mut out, n, |row, chunk| {
                for (p, x) in chunk.iter_mut().enumerate() {
                    let block = &c[16 * p + 4 * row..16 * p + 4 * row + 4];
                    *x = (0..4).map(|col| block[col] * v[col * n + p]).sum();
                }
            });
            out
        }
        Expr::Perm(perm) => {
            let mut out = vec![0.0; v.len()];
            par::for_each_chunk(&mut out, m, |line, chunk| {
                let src = &v[line * m..(line + 1) * m];
                for (x, &q) in chunk.iter_mut().zip(perm.iter()) {
                    *x = src[q];
                }
            });
            out
        }
        Expr::Radial(d) => {
            let mut out = vec![0.0; v.len()];
            par::for_each_chunk(&mut out, m, |line, chunk| {
                let (c, j) = (line / nr, line % nr);
                for i in 0..nr {
                    let s = d[(j, i)];
                    let src = &v[(c * nr + i) * m..(c * nr + i + 1) * m];
                    for (x, y) in chunk.iter_mut().zip(src) {
                        *x += s * y;
                    }
                }
            });
            out
        }
        Expr::Angular(d) => {
            let mut out = vec![0.0; v.len()];
            par::for_each_chunk(&mut out, m, |line, chunk| {
                let src = &v[line * m..(line + 1) * m];
                for (i, x) in chunk.iter_mut().enumerate() {
                    *x = (0..m).map(|l| d[(i, l)] * src[l]).sum();
                }
            });
            out
        }
        Expr::Dense(d) => (d.as_ref() * DVector::from_column_slice(v)).as_slice().to_vec(),
        Expr::Sum(terms) => {
            let mut out = vec![0.0; v.len()];
            for (s, t) in terms {
                let y = apply(t, v, ctx);
                for (x, y) in out.iter_mut().zip(y) {
                    *x += s * y;
                }
            }
            out
        }
        Expr::Product(factors) => {
            let mut cur = v.to_vec();
            for f in factors.iter().rev() {
                cur = apply(f, &cur, ctx);
            }
            cur
        }
        Expr::Words { factors, words, scale } => {
            let terms = par::map_collect(words.as_slice(), |w| {
                let mut cur = v.to_vec();
                for &i in w.iter().rev() {
                    cur = apply(&factors[i], &cur, ctx);
                }
                cur
            });
            let mut out = vec![0.0; v.len()];
            for t in terms {
                for (x, y) in out.iter_mut().zip(t) {
                    *x += scale * y;
                }
            }
            out
        }
    }
}

// Operator overloads panic on mismatched operands; the `try_*` forms report
// the error instead.

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        self.try_add(rhs).expect("operator sum")
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        self.try_sub(rhs).expect("operator difference")
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        self.try_mul(rhs).expect("operator product")
    }
}

impl Mul<&OperatorMatrix> for f64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale(self)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ModelParams;
    use crate::grid::{build_grid, inner_product, GridSpec};
    use rand::{Rng, SeedableRng};

    fn grid() -> Grid {
        build_grid(GridSpec::new(16, 6, ModelParams::new(1.2, 1.0, 1.0, 1.0).unwrap())).unwrap()
    }

    fn random(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn inverse_radius_on_radius() {
        let g = grid();
        let inv = OperatorMatrix::multiplier(&g, 1, |r, _| 1.0 / r);
        let v = inv.apply(&g.sample(|r, _| r)).unwrap();
        assert!(v.iter().all(|x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn dense_matches_apply_and_transpose() {
        let g = grid();
        let c = Matrix4::from_fn(|i, j| (i * 4 + j) as f64 - 5.0);
        let fm = OperatorMatrix::fermion(&g, &c);
        let dr = OperatorMatrix::d_r(&g, 4);
        let mult = OperatorMatrix::multiplier(&g, 4, |r, phi| r * phi.cos() + 2.0);
        let perm = OperatorMatrix::permutation(&g, 4, (0..16).map(|m| (m + 3) % 16).collect()).unwrap();
        let op = &(&(&fm * &dr) + &(&mult * &perm)) - &(2.5 * &OperatorMatrix::d_phi(&g, 4));
        let d = op.to_dense();
        let v = random(op.dim(), 1);
        let direct = op.apply(&v).unwrap();
        let via = &d * DVector::from_column_slice(&v);
        assert!(direct.iter().zip(via.iter()).all(|(a, b)| (a - b).abs() < 1e-12));
        let t = op.transpose().to_dense();
        assert!((t - d.transpose()).amax() < 1e-12);
    }

    #[test]
    fn adjoint_in_both_gauges() {
        let g = grid();
        let op = &OperatorMatrix::d_r(&g, 1) * &OperatorMatrix::multiplier(&g, 1, |r, phi| r + phi.sin());
        let (u, v) = (random(g.nodes(), 2), random(g.nodes(), 3));
        let lhs = inner_product(&u, &op.apply(&v).unwrap(), &g).unwrap();
        let rhs = inner_product(&op.adjoint().apply(&u).unwrap(), &v, &g).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        let s = op.symmetric();
        assert!((s.adjoint().to_dense() - s.to_dense().transpose()).amax() < 1e-9);
    }

    #[test]
    fn word_sum_matches_explicit_products() {
        let g = grid();
        let a = OperatorMatrix::d_r(&g, 1);
        let b = OperatorMatrix::multiplier(&g, 1, |r, phi| r * phi.sin() + 1.0);
        let c = OperatorMatrix::d_phi(&g, 1);
        let ops = [a.clone(), b.clone(), c.clone()];
        let w = OperatorMatrix::word_sum(&ops, vec![vec![0, 1, 2], vec![2, 0, 1]], 0.5).unwrap();
        let explicit = 0.5 * &(&(&(&a * &b) * &c) + &(&(&c * &a) * &b));
        let v = random(g.nodes(), 9);
        let (x, y) = (w.apply(&v).unwrap(), explicit.apply(&v).unwrap());
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-12));
        assert!((w.transpose().to_dense() - w.to_dense().transpose()).amax() < 1e-12);
    }

    #[test]
    fn gauge_mixing_is_rejected() {
        let g = grid();
        let a = OperatorMatrix::d_phi(&g, 1);
        assert_eq!(a.try_mul(&a.symmetric()).unwrap_err(), Error::GaugeMismatch);
        assert!(a.try_add(&OperatorMatrix::d_phi(&g, 4)).is_err());
    }

    #[test]
    fn ring_derivative_is_antisymmetric() {
        let g = grid();
        let d = OperatorMatrix::d_phi(&g, 1).symmetric().to_dense();
        assert!((&d + d.transpose()).amax() < 1e-13);
    }

    #[test]
    fn lifted_scalar_acts_per_component() {
        let g = grid();
        let s = OperatorMatrix::d_phi(&g, 1);
        let l = s.with_fermions(4).unwrap();
        let v = random(4 * g.nodes(), 4);
        let out = l.apply(&v).unwrap();
        let n = g.nodes();
        for c in 0..4 {
            let part = s.apply(&v[c * n..(c + 1) * n]).unwrap();
            assert_eq!(part, out[c * n..(c + 1) * n].to_vec());
        }
    }
}
