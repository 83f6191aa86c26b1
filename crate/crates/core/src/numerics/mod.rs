//! Special functions, quadrature, differentiation matrices and the dense
//! symmetric eigensolver shared by the rest of the crate.

pub mod diff;
pub mod eigen;
pub mod quadrature;
pub mod special;

pub use diff::{diff_matrix, gaussian_diff_matrix, weighted_diff_matrix, DiffMatrix};
pub use eigen::{symmetric_eigen, symmetry_defect, SymmetricEigen};
pub use quadrature::{
    gauss_jacobi_rule, gauss_laguerre_rule, half_range_gauss_rule, shifted_half_range_gauss_rule, uniform_periodic_rule, QuadratureRule, RuleKind,
};
pub use special::{gamma, jacobi, laguerre, ln_gamma};
