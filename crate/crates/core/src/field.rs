//! Sampled fields, their spectra, and the transforms between them.
//!
//! Conventions: `F f(xi) = ∫ e^{-i x·xi} f(x) dx` discretized as `h^n` times a
//! DFT, and `F^{-1} G(x) = (2π)^{-n} ∫ e^{i x·xi} G(xi) dxi` discretized with the
//! weight `(2π)^{-n} dxi^n = L^{-n}`. Spectra are stored in centered order, so
//! storage position `c` along an axis holds the wavenumber `c - M/2`.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::dft_inplace;
use crate::grid::{Grid, Point};

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    samples: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("field sample".into()));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            samples: vec![ZERO; grid.len()],
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(&Point) -> Complex64 + Sync) -> Self {
        let samples = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.point(i)))
            .collect();
        Self { grid, samples }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(&Point) -> f64 + Sync) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn scale(&self, a: Complex64) -> Field {
        Field {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * a).collect(),
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        check_grid(&self.grid, &other.grid)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Field {
            grid: self.grid,
            samples,
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        check_grid(&self.grid, &other.grid)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Field {
            grid: self.grid,
            samples,
        })
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: self.grid,
            samples: self.samples.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Pointwise modulus as a real-valued field.
    pub fn abs(&self) -> Field {
        self.map(|z| Complex64::new(z.norm(), 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Relative discrepancy `max|f - g| / max(max|g|, tiny)`.
    pub fn rel_max_diff(&self, other: &Field) -> Result<f64> {
        check_grid(&self.grid, &other.grid)?;
        let diff = self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()));
        Ok(diff / other.max_abs().max(f64::MIN_POSITIVE))
    }

    /// Relative discrepancy in the discrete `L^2` norm.
    pub fn rel_l2_diff(&self, other: &Field) -> Result<f64> {
        check_grid(&self.grid, &other.grid)?;
        let num: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.samples.iter().map(|b| b.norm_sqr()).sum();
        Ok((num / den.max(f64::MIN_POSITIVE)).sqrt())
    }
}

impl Spectrum {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![ZERO; grid.len()],
        }
    }

    /// Samples `g` at every lattice frequency.
    pub fn from_fn(grid: Grid, g: impl Fn(&Point) -> Complex64 + Sync) -> Self {
        let coeffs = (0..grid.len())
            .into_par_iter()
            .map(|i| g(&grid.frequency(i)))
            .collect();
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Multiplies every coefficient by `m(xi)`.
    pub fn multiply(&self, m: impl Fn(&Point) -> f64 + Sync) -> Spectrum {
        let g = self.grid;
        let coeffs = self
            .coeffs
            .par_iter()
            .enumerate()
            .map(|(i, &c)| {
                if c == ZERO {
                    ZERO
                } else {
                    c * m(&g.frequency(i))
                }
            })
            .collect();
        Spectrum { grid: g, coeffs }
    }

    /// Value at a lattice frequency.
    pub fn at(&self, xi: &Point) -> Result<Complex64> {
        let k = self.grid.lattice_indices(xi)?;
        Ok(self.coeffs[self.grid.index_of_wavenumbers(k)])
    }

    /// Indices of the nonzero coefficients, in storage order.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(i, _)| i)
            .collect()
    }

    /// Relative `l^2` mass in the outer 10% of the frequency lattice (per axis
    /// sup-norm of the wavenumber beyond `0.9 M/2`).
    pub fn tail_mass(&self) -> f64 {
        let g = self.grid;
        let cut = 0.9 * (g.samples() / 2) as f64;
        let mut outer = 0.0;
        let mut total = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = g.wavenumbers(i);
            let w = c.norm_sqr();
            total += w;
            if k[0].abs() as f64 > cut || k[1].abs() as f64 > cut {
                outer += w;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            (outer / total).sqrt()
        }
    }
}

fn check_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

fn parity(k: [i64; 2]) -> f64 {
    if (k[0] + k[1]).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Maps a centered storage index to the natural DFT index and back (both are
/// the same involution: a cyclic shift by `M/2` along each axis).
fn shift_index(grid: &Grid, idx: usize) -> usize {
    let m = grid.samples();
    let ij = grid.split(idx);
    let s = |c: usize| (c + m / 2) % m;
    grid.join([s(ij[0]), s(ij[1])])
}

pub fn forward_transform(f: &Field) -> Spectrum {
    let g = *f.grid();
    let mut buf = f.samples.clone();
    dft_inplace(&mut buf, g.samples(), g.dim(), true);
    let cell = g.cell();
    let coeffs = (0..g.len())
        .into_par_iter()
        .map(|c| {
            let d = shift_index(&g, c);
            buf[d] * (cell * parity(g.wavenumbers(c)))
        })
        .collect();
    Spectrum { grid: g, coeffs }
}

pub fn inverse_transform(s: &Spectrum) -> Field {
    let g = *s.grid();
    let mut buf = vec![ZERO; g.len()];
    for (c, &v) in s.coeffs.iter().enumerate() {
        buf[shift_index(&g, c)] = v * parity(g.wavenumbers(c));
    }
    dft_inplace(&mut buf, g.samples(), g.dim(), false);
    let w = g.dual_cell();
    buf.iter_mut().for_each(|z| *z *= w);
    Field {
        grid: g,
        samples: buf,
    }
}

/// Discrete `L^p` norm `(h^n Σ|f|^p)^{1/p}`, max for `p = ∞`; requires `p ≥ 1`.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(format!(
            "L^p norm needs p >= 1, got {p}"
        )));
    }
    lp_quasi_norm(f, p)
}

/// The same Riemann sum for any `p > 0`; a quasi-norm when `p < 1`.
pub fn lp_quasi_norm(f: &Field, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidExponent(format!(
            "p must be positive, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let cell = f.grid().cell();
    let s: f64 = if p == 2.0 {
        f.samples.iter().map(|z| z.norm_sqr()).sum()
    } else {
        f.samples.iter().map(|z| z.norm().powf(p)).sum()
    };
    Ok((cell * s).powf(1.0 / p))
}

/// `e^{i xi0·x} f(x - x0)` with `x0` on the grid and `xi0` on the lattice.
pub fn modulate_translate(f: &Field, x0: &Point, xi0: &Point) -> Result<Field> {
    let g = *f.grid();
    let shift = g.grid_offsets(x0)?;
    g.lattice_indices(xi0)?;
    let m = g.samples() as i64;
    let samples = (0..g.len())
        .map(|i| {
            let ij = g.split(i);
            let src = [
                (ij[0] as i64 - shift[0]).rem_euclid(m) as usize,
                (ij[1] as i64 - shift[1]).rem_euclid(m) as usize,
            ];
            let src = if g.dim() == 1 { [src[0], 0] } else { src };
            let x = g.point(i);
            let phase = xi0[0] * x[0] + xi0[1] * x[1];
            f.samples[g.join(src)] * Complex64::from_polar(1.0, phase)
        })
        .collect();
    Ok(Field { grid: g, samples })
}

/// Writes the text field format: a header `n,L,M` then one `re,im` line per
/// sample in row-major grid order.
pub fn write_field<W: Write>(f: &Field, mut w: W) -> Result<()> {
    let g = f.grid();
    writeln!(w, "{},{},{}", g.dim(), g.length(), g.samples())?;
    for z in &f.samples {
        writeln!(w, "{},{}", z.re, z.im)?;
    }
    Ok(())
}

pub fn read_field<R: BufRead>(r: R) -> Result<Field> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty field file".into()))??;
    let parts: Vec<&str> = header.trim().split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("bad header `{header}`")));
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
    };
    let n = parts[0]
        .trim()
        .parse::<usize>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let length = num(parts[1])?;
    let m = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let grid = Grid::new(n, length, m)?;
    let mut samples = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad sample line `{line}`")))?;
        samples.push(Complex64::new(num(re)?, num(im)?));
    }
    Field::new(grid, samples)
}
