//! Full-circle polar collocation grid.
//!
//! Vectors on the grid are laid out as `[fermion c][ring j][angle m]`, so a
//! scalar field has `Nr * M` entries and a fermion-valued one `4 * Nr * M`.

use std::f64::consts::PI;
use std::ops::Deref;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::exact::ModelParams;
use crate::numerics::{diff_matrix, weighted_diff_matrix, shifted_half_range_gauss_rule, uniform_periodic_rule, QuadratureRule, RuleKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Nr")]
    pub nr: usize,
    pub params: ModelParams,
    /// Radial nodes come from the Gauss rule for `t^{2s+1} e^{-t²}` and ray
    /// functions are represented as `r^s e^{-ωr²/2} p(r)`. The default
    /// `s = 0` covers every smooth function; `s > 0` only represents
    /// functions vanishing like `r^s` at the origin but keeps high-order
    /// operator products well conditioned on them.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub radial_shift: u32,
}

fn is_zero(s: &u32) -> bool {
    *s == 0
}

impl GridSpec {
    pub fn new(m: usize, nr: usize, params: ModelParams) -> Self {
        Self { m, nr, params, radial_shift: 0 }
    }

    pub fn with_radial_shift(self, s: u32) -> Self {
        Self { radial_shift: s, ..self }
    }

    pub fn validate(&self) -> Result<usize> {
        let k = self.params.integer_k().map_err(|_| Error::Grid(format!("grid needs a positive integer k, got {}", self.params.k)))?;
        if self.m == 0 || !self.m.is_multiple_of(8 * k) {
            return Err(Error::Grid(format!("M = {} is not a positive multiple of 8k = {}", self.m, 8 * k)));
        }
        if self.nr == 0 {
            return Err(Error::Grid("Nr must be at least 1".into()));
        }
        Ok(k)
    }
}

#[derive(Debug)]
pub struct GridData {
    pub spec: GridSpec,
    pub k: usize,
    pub phi: Vec<f64>,
    pub r: Vec<f64>,
    /// `∫ r dr` weights on the radial nodes.
    pub radial_weights: Vec<f64>,
    /// Combined `r dr dφ` weights, length `Nr * M`.
    pub weights: Vec<f64>,
    pub sqrt_weights: Vec<f64>,
    pub d_phi: DMatrix<f64>,
    /// Ray derivative for functions `r^s e^{-ωr²/2} p(r)`.
    pub d_r: DMatrix<f64>,
}

/// Cheaply clonable handle on an immutable grid.
#[derive(Clone, Debug)]
pub struct Grid(Arc<GridData>);

impl Deref for Grid {
    type Target = GridData;
    fn deref(&self) -> &GridData {
        &self.0
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

pub fn build_grid(spec: GridSpec) -> Result<Grid> {
    let k = spec.validate()?;
    let omega = spec.params.omega;
    let angular = uniform_periodic_rule(spec.m)?;
    let shift = spec.radial_shift;
    let t = shifted_half_range_gauss_rule(spec.nr, shift)?;
    // r = t/√ω turns t e^{-t²} dt into ω r e^{-ωr²} dr
    let r: Vec<f64> = t.nodes.iter().map(|x| x / omega.sqrt()).collect();
    let radial_weights: Vec<f64> =
        t.nodes.iter().zip(&t.weights).map(|(x, w)| w * (x * x).exp() / (x.powi(2 * shift as i32) * omega)).collect();
    let radial_rule = QuadratureRule { kind: RuleKind::HalfRangeGauss { s: shift }, nodes: r.clone(), weights: radial_weights.clone() };
    let d_r = weighted_diff_matrix(&radial_rule, 0.5 * omega, shift).entries;
    let d_phi = diff_matrix(&angular).entries;
    let h = 2.0 * PI / spec.m as f64;
    let weights: Vec<f64> = radial_weights.iter().flat_map(|&w| std::iter::repeat_n(w * h, spec.m)).collect();
    let sqrt_weights = weights.iter().map(|w| w.sqrt()).collect();
    Ok(Grid(Arc::new(GridData { spec, k, phi: angular.nodes, r, radial_weights, weights, sqrt_weights, d_phi, d_r })))
}

impl GridData {
    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn nr(&self) -> usize {
        self.spec.nr
    }

    pub fn params(&self) -> &ModelParams {
        &self.spec.params
    }

    /// Number of scalar nodes, `Nr * M`.
    pub fn nodes(&self) -> usize {
        self.spec.m * self.spec.nr
    }

    /// `(r, φ)` of scalar node `p`.
    pub fn coords(&self, p: usize) -> (f64, f64) {
        (self.r[p / self.spec.m], self.phi[p % self.spec.m])
    }

    /// Samples of `f(r, φ)` on every node.
    pub fn sample<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F) -> Vec<f64> {
        let idx: Vec<usize> = (0..self.nodes()).collect();
        crate::par::map_collect(&idx, |&p| {
            let (r, phi) = self.coords(p);
            f(r, phi)
        })
    }

    /// Fermion factor of a vector of length `len`.
    pub fn fermion_factor(&self, len: usize) -> Result<usize> {
        match len / self.nodes() {
            f @ (1 | 4) if f * self.nodes() == len => Ok(f),
            _ => Err(Error::Dimension { expected: self.nodes(), got: len }),
        }
    }
}

/// Quadrature inner product `Σ w f g` over the plane (all fermion components).
pub fn inner_product(f: &[f64], g: &[f64], grid: &Grid) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::Dimension { expected: f.len(), got: g.len() });
    }
    grid.fermion_factor(f.len())?;
    let n = grid.nodes();
    Ok(f.iter().zip(g).enumerate().map(|(i, (x, y))| grid.weights[i % n] * x * y).sum())
}

pub fn norm(f: &[f64], grid: &Grid) -> Result<f64> {
    inner_product(f, f, grid).map(f64::sqrt)
}
