pub mod connection;
pub mod dihedral;
pub mod dunkl;
pub mod error;
pub mod exact;
pub mod fermion;
pub mod grid;
pub mod numerics;
pub mod operator;
pub mod osp;
pub mod par;
pub mod probe;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
