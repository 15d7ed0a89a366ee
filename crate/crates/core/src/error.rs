use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("exponent out of range: {0}")]
    InvalidExponent(String),
    #[error("frequency {0:?} is not on the frequency lattice")]
    OffLattice([f64; 2]),
    #[error("point {0:?} is not on the spatial grid")]
    OffGrid([f64; 2]),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("aliasing guard: relative spectral mass {mass:e} outside the resolved shells")]
    Aliasing { mass: f64 },
    #[error("grid too large for the direct quadrature path ({0} points per axis)")]
    DirectTooLarge(usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("negative entry in nonnegative input: {0}")]
    Negative(String),
    #[error("zero window function")]
    ZeroWindow,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
