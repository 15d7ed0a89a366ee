//! Numerical laboratory for bilinear pseudo-differential operators of
//! `S_{0,0}` type on periodic grids.
//!
//! The crate is organised bottom-up:
//!
//! * [`grid`], [`field`]: periodic grids, sampled fields, Fourier transforms.
//! * [`partitions`]: Littlewood–Paley and frequency-uniform partitions of unity.
//! * [`spaces`]: Besov, amalgam, modulation and Wiener amalgam norms.
//! * [`operator`]: evaluation of `T_σ`, symbol seminorms, symbol decomposition,
//!   the peak operator and the checks built on top of them.
//! * [`constructions`]: the explicit symbol and data families.
//! * [`experiments`]: scaling-law harness, CSV records, self-test.

pub mod constructions;
pub mod error;
pub mod experiments;
mod fft;
pub mod field;
pub mod grid;
pub mod operator;
pub mod partitions;
pub mod spaces;

pub use error::{Error, Result};
pub use field::{forward_transform, inverse_transform, lp_norm, lp_quasi_norm, Field, Spectrum};
pub use grid::{Grid, Point};
pub use num_complex::Complex64;
pub use partitions::{build_dyadic, build_uniform, DyadicPartition, Flavor, UniformPartition};
