//! Function-space norms on sampled fields.

mod amalgam;
mod besov;
mod schur;
mod stft;

pub use amalgam::amalgam_norm;
pub use besov::{besov_blocks, besov_norm, BesovParams};
pub use schur::{schur_bound, SchurBound};
pub use stft::{
    amalgam_wiener_equivalence_report, as_spectrum, default_window, dual_pairing, modulation_norm,
    stft, uniform_wiener_norm, wiener_norm, RatioReport, StftGabor,
};

use crate::error::{Error, Result};

/// `(Σ a_i^q)^{1/q}`, `max` for `q = ∞`; `q > 0`.
pub(crate) fn lq_sum(values: impl IntoIterator<Item = f64>, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::InvalidExponent(format!(
            "q must be positive, got {q}"
        )));
    }
    if q.is_infinite() {
        return Ok(values.into_iter().fold(0.0, f64::max));
    }
    let s: f64 = values.into_iter().map(|v| v.powf(q)).sum();
    Ok(s.powf(1.0 / q))
}
