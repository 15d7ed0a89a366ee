use rayon::prelude::*;

use super::{amalgam_norm, lq_sum};
use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, Field, Spectrum, ZERO};
use crate::grid::{norm, Grid};
use crate::partitions::UniformPartition;
use num_complex::Complex64;

/// Sampled short-time Fourier transform on the full `(x, ξ)` lattice.
#[derive(Debug, Clone)]
pub struct StftGabor {
    window: Field,
    /// `values[x * len + xi]`, both indices in grid order.
    values: Vec<Complex64>,
}

impl StftGabor {
    pub fn window(&self) -> &Field {
        &self.window
    }

    pub fn grid(&self) -> &Grid {
        self.window.grid()
    }

    pub fn at(&self, x: usize, xi: usize) -> Complex64 {
        self.values[x * self.grid().len() + xi]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn abs_rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.values.chunks(self.grid().len())
    }
}

/// `exp(-|t|²/2)`, set to zero where it drops below `1e-16`.
pub fn default_window(grid: &Grid) -> Field {
    Field::from_real_fn(*grid, |t| {
        let v = (-0.5 * norm(t).powi(2)).exp();
        if v < 1e-16 {
            0.0
        } else {
            v
        }
    })
}

fn shifted_index(grid: &Grid, t: usize, x: usize) -> usize {
    let m = grid.samples();
    let (a, b) = (grid.split(t), grid.split(x));
    let mut d = [0usize; 2];
    for k in 0..grid.dim() {
        // t - x + M/2 wraps the centred window onto position x
        d[k] = (a[k] + m + m / 2 - b[k]) % m;
    }
    grid.join(d)
}

/// `V_φ f(x, ξ) = ∫ f(t) conj(φ(t - x)) e^{-itξ} dt` for every grid point `x` and lattice frequency `ξ`.
pub fn stft(f: &Field, window: &Field) -> Result<StftGabor> {
    let grid = *f.grid();
    if !grid.same_as(window.grid()) {
        return Err(Error::GridMismatch);
    }
    if window.max_abs() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let len = grid.len();
    let fs = f.samples();
    let ws = window.samples();
    let rows: Vec<Vec<Complex64>> = (0..len)
        .into_par_iter()
        .map(|x| {
            let prod: Vec<Complex64> = (0..len)
                .map(|t| fs[t] * ws[shifted_index(&grid, t, x)].conj())
                .collect();
            let prod = Field::new(grid, prod).expect("finite product");
            forward_transform(&prod).coeffs().to_vec()
        })
        .collect();
    Ok(StftGabor {
        window: window.clone(),
        values: rows.concat(),
    })
}

/// `‖ ‖V_φ f(·, ξ)‖_{L^p_x} ‖_{L^q_ξ}` as a Riemann sum over the lattice.
pub fn modulation_norm(f: &Field, p: f64, q: f64, window: &Field) -> Result<f64> {
    check_pq(p, q)?;
    let v = stft(f, window)?;
    let g = *f.grid();
    let len = g.len();
    let per_xi: Vec<f64> = (0..len)
        .map(|xi| weighted_lp((0..len).map(|x| v.at(x, xi).norm()), p, g.cell()))
        .collect();
    Ok(weighted_lp(per_xi, q, g.dxi().powi(g.dim() as i32)))
}

/// `‖ ‖V_φ f(x, ·)‖_{L^q_ξ} ‖_{L^p_x}` as a Riemann sum over the lattice.
pub fn wiener_norm(f: &Field, p: f64, q: f64, window: &Field) -> Result<f64> {
    check_pq(p, q)?;
    let v = stft(f, window)?;
    let g = *f.grid();
    let dxi = g.dxi().powi(g.dim() as i32);
    let per_x: Vec<f64> = v
        .abs_rows()
        .map(|row| weighted_lp(row.iter().map(|z| z.norm()), q, dxi))
        .collect();
    Ok(weighted_lp(per_x, p, g.cell()))
}

/// `‖(Σ_ν |φ(D - ν) f|^q)^{1/q}‖_{L^p}` with the uniform partition `φ`.
pub fn uniform_wiener_norm(f: &Field, p: f64, q: f64, part: &UniformPartition) -> Result<f64> {
    check_pq(p, q)?;
    let g = *f.grid();
    let spec = forward_transform(f);
    let support = spec.support();
    let reach = g.nyquist().ceil() as i64 + 1;
    let mut nus = Vec::new();
    for a in -reach..=reach {
        for b in if g.dim() == 2 { -reach..=reach } else { 0..=0 } {
            let nu = [a, b];
            // skip translates that see none of the spectrum
            if support
                .iter()
                .any(|&i| part.phi_at(nu, &g.frequency(i)) != 0.0)
            {
                nus.push(nu);
            }
        }
    }
    let pieces: Vec<Vec<f64>> = nus
        .par_iter()
        .map(|&nu| {
            let piece = inverse_transform(&spec.multiply(|xi| part.phi_at(nu, xi)));
            piece.samples().iter().map(|z| z.norm()).collect()
        })
        .collect();
    let mut acc = vec![0.0f64; g.len()];
    for piece in &pieces {
        for (a, v) in acc.iter_mut().zip(piece) {
            if q.is_infinite() {
                *a = a.max(*v);
            } else {
                *a += v.powf(q);
            }
        }
    }
    let pointwise = acc
        .into_iter()
        .map(|s| if q.is_infinite() { s } else { s.powf(1.0 / q) });
    Ok(weighted_lp(pointwise, p, g.cell()))
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::InvalidExponent(format!("p={p}, q={q} must be >= 1")));
    }
    Ok(())
}

fn weighted_lp(values: impl IntoIterator<Item = f64>, p: f64, weight: f64) -> f64 {
    let s = lq_sum(values, p).expect("p checked");
    if p.is_infinite() {
        s
    } else {
        weight.powf(1.0 / p) * s
    }
}

/// `h^n Σ f(x) conj(g(x))`.
pub fn dual_pairing(f: &Field, g: &Field) -> Result<Complex64> {
    if !f.grid().same_as(g.grid()) {
        return Err(Error::GridMismatch);
    }
    let s: Complex64 = f
        .samples()
        .iter()
        .zip(g.samples())
        .fold(ZERO, |acc, (a, b)| acc + a * b.conj());
    Ok(s * f.grid().cell())
}

/// Spread of a family of norm ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl RatioReport {
    pub fn from_ratios(ratios: Vec<f64>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::OutOfRange("empty suite".into()));
        }
        let mut sorted = ratios.clone();
        sorted.sort_by(f64::total_cmp);
        let k = sorted.len();
        let median = if k % 2 == 1 {
            sorted[k / 2]
        } else {
            0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
        };
        Ok(Self {
            min: sorted[0],
            max: sorted[k - 1],
            median,
            ratios,
        })
    }

    pub fn spread(&self) -> f64 {
        self.max / self.min
    }
}

/// `‖f‖_{(L²,ℓ¹)} / ‖f‖_{W_{1,2}}` over a suite, with the default window.
pub fn amalgam_wiener_equivalence_report(suite: &[Field]) -> Result<RatioReport> {
    let ratios = suite
        .iter()
        .map(|f| {
            let w = wiener_norm(f, 1.0, 2.0, &default_window(f.grid()))?;
            Ok(amalgam_norm(f, 2.0, 1.0)? / w)
        })
        .collect::<Result<Vec<_>>>()?;
    RatioReport::from_ratios(ratios)
}

/// Reads the samples of `f` as lattice coefficients; only meaningful on a self-dual grid.
pub fn as_spectrum(f: &Field) -> Spectrum {
    Spectrum::new(*f.grid(), f.samples().to_vec()).expect("same layout")
}
