use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not symmetric (relative defect {0:e})")]
    NotSymmetric(f64),
    #[error("odd integer k required, got k = {0} (the even-k Dunkl construction is not supported)")]
    EvenK(f64),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("mixed gauges in operator composition")]
    GaugeMismatch,
    #[error("mismatched dihedral order: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("sample at a pole: phi = {0}")]
    Pole(f64),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
