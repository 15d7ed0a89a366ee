use std::sync::Arc;

use super::bump::ScaledBump;
use super::constants::smallest_constants;
use super::families::{guarded, FamilyInstance, FamilyParam, FamilyTag, Reference};
use crate::error::{Error, Result};
use crate::field::Spectrum;
use crate::grid::{Grid, Point};
use num_complex::Complex64;

/// `f_N = Σ_{k=N0}^{N} e^{i 2^k x_1} Φ(x)`, assembled on the spectral side.
pub fn prop13_family(n_top: u32, grid: &Grid) -> Result<FamilyInstance> {
    let n0 = smallest_constants(grid.dim()).n0;
    if n_top < n0 {
        return Err(Error::OutOfRange(format!("N = {n_top} below N0 = {n0}")));
    }
    if 2f64.powi(n_top as i32 + 1) >= grid.nyquist() {
        return Err(Error::OutOfRange(format!("N = {n_top}: 2^(N+1) not under Nyquist")));
    }
    if grid.length().fract() != 0.0 {
        return Err(Error::InvalidGrid("prop13 needs an integer period".into()));
    }
    let bump = ScaledBump::for_grid(grid)?;
    let centres: Vec<f64> = (n0..=n_top).map(|k| 2f64.powi(k as i32)).collect();
    let c = centres.clone();
    let spec = Spectrum::from_fn(*grid, move |xi| {
        let v: f64 = c.iter().map(|&s| bump.phi(&[xi[0] - s, xi[1]])).sum();
        Complex64::new(v, 0.0)
    });
    let f = guarded(spec)?;
    let reference: Reference = Arc::new(move |x: &Point| {
        let phase: Complex64 = centres.iter().map(|&s| Complex64::from_polar(1.0, s * x[0])).sum();
        phase * bump.inverse(x)
    });
    Ok(FamilyInstance { tag: FamilyTag::Prop13, param: FamilyParam::N(n_top), symbol: None, fields: vec![f], reference: Some(reference) })
}

/// Scaled bump used by [`prop13_family`] on `grid`.
pub fn prop13_bump(grid: &Grid) -> Result<ScaledBump> {
    ScaledBump::for_grid(grid)
}
