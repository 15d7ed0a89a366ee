use rayon::prelude::*;

use super::lq_sum;
use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, lp_quasi_norm, Field, ZERO};
use crate::grid::norm;
use crate::partitions::DyadicPartition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0) || !(q > 0.0) || !s.is_finite() {
            return Err(Error::InvalidExponent(format!(
                "Besov parameters s={s}, p={p}, q={q}"
            )));
        }
        Ok(Self { s, p, q })
    }
}

/// Relative spectral mass that the truncated partition does not resolve.
const ALIAS_TOL: f64 = 1e-9;
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// `‖ψ_ℓ(D) f‖_{L^p}` for `ℓ = 0..=ℓ_max`.
pub fn besov_blocks(f: &Field, p: f64, part: &DyadicPartition) -> Result<Vec<f64>> {
    let mut spec = forward_transform(f);
    let g = *f.grid();
    // flush FFT round-off; for q < 1 it would otherwise leak into empty shells at the √ε level
    let floor = ROUNDOFF * spec.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    for c in spec.coeffs_mut() {
        if c.norm() <= floor {
            *c = ZERO;
        }
    }
    let radius = part.resolved_radius();
    let (mut outside, mut total) = (0.0, 0.0);
    for (i, c) in spec.coeffs().iter().enumerate() {
        let w = c.norm_sqr();
        total += w;
        if norm(&g.frequency(i)) > radius {
            outside += w;
        }
    }
    if total > 0.0 && (outside / total).sqrt() > ALIAS_TOL {
        return Err(Error::Aliasing {
            mass: (outside / total).sqrt(),
        });
    }
    (0..=part.max_shell())
        .into_par_iter()
        .map(|l| {
            let block = inverse_transform(&spec.multiply(|xi| part.psi(l, xi)));
            lp_quasi_norm(&block, p)
        })
        .collect()
}

/// `(Σ_ℓ 2^{ℓ s q} ‖ψ_ℓ(D) f‖_{L^p}^q)^{1/q}`, supremum for `q = ∞`.
pub fn besov_norm(f: &Field, params: BesovParams, part: &DyadicPartition) -> Result<f64> {
    let blocks = besov_blocks(f, params.p, part)?;
    let weighted = blocks
        .iter()
        .enumerate()
        .map(|(l, b)| 2f64.powf(l as f64 * params.s) * b);
    lq_sum(weighted, params.q)
}
