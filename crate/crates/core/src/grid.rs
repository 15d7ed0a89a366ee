//! Uniform periodic grids on the torus `[-L/2, L/2)^n`, `n ∈ {1, 2}`.
//!
//! Points and frequencies are carried as `[f64; 2]`; in one dimension the
//! second component is always zero so Euclidean lengths need no special case.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A point of `R^n` (or of the dual frequency space), padded to two components.
pub type Point = [f64; 2];

pub fn norm(p: &Point) -> f64 {
    p[0].hypot(p[1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    samples: usize,
}

impl Grid {
    pub fn new(n: usize, length: f64, samples: usize) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::InvalidGrid(format!(
                "dimension {n} (only 1 and 2 are supported)"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "period {length} must be positive"
            )));
        }
        if samples < 2 || !samples.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "{samples} samples per axis is not a power of two"
            )));
        }
        Ok(Self { n, length, samples })
    }

    /// Grid whose spatial spacing equals its frequency spacing, `L = sqrt(2 pi M)`.
    ///
    /// On such a grid the spatial and frequency lattices coincide index by index,
    /// which makes the Fourier symmetry of the short-time transform exact.
    pub fn self_dual(n: usize, samples: usize) -> Result<Self> {
        Self::new(n, (2.0 * PI * samples as f64).sqrt(), samples)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Period `L` per axis.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Samples per axis `M`.
    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Total number of samples `M^n`.
    pub fn len(&self) -> usize {
        self.samples.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spatial spacing `h = L / M`.
    pub fn h(&self) -> f64 {
        self.length / self.samples as f64
    }

    /// Frequency spacing `2 pi / L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Nyquist frequency `pi M / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.samples as f64 / self.length
    }

    /// Cell volume `h^n` of the Riemann sum in `x`.
    pub fn cell(&self) -> f64 {
        self.h().powi(self.n as i32)
    }

    /// Cell volume `(2 pi)^{-n} dxi^n` of the inverse-transform sum, which is `L^{-n}`.
    pub fn dual_cell(&self) -> f64 {
        self.length.powi(-(self.n as i32))
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }

    /// Splits a flat row-major index into per-axis indices.
    pub fn split(&self, idx: usize) -> [usize; 2] {
        if self.n == 1 {
            [idx, 0]
        } else {
            [idx / self.samples, idx % self.samples]
        }
    }

    pub fn join(&self, ij: [usize; 2]) -> usize {
        if self.n == 1 {
            ij[0]
        } else {
            ij[0] * self.samples + ij[1]
        }
    }

    /// Spatial coordinate of a flat sample index.
    pub fn point(&self, idx: usize) -> Point {
        let ij = self.split(idx);
        let h = self.h();
        let x0 = -0.5 * self.length;
        let mut p = [x0 + ij[0] as f64 * h, 0.0];
        if self.n == 2 {
            p[1] = x0 + ij[1] as f64 * h;
        }
        p
    }

    /// Signed lattice index `k ∈ [-M/2, M/2)` of a centered storage position.
    pub fn wavenumber(&self, c: usize) -> i64 {
        c as i64 - (self.samples / 2) as i64
    }

    /// Signed lattice indices of a flat centered spectrum index.
    pub fn wavenumbers(&self, idx: usize) -> [i64; 2] {
        let ij = self.split(idx);
        let mut k = [self.wavenumber(ij[0]), 0];
        if self.n == 2 {
            k[1] = self.wavenumber(ij[1]);
        }
        k
    }

    /// Flat centered index of signed lattice indices, wrapping modulo `M`.
    pub fn index_of_wavenumbers(&self, k: [i64; 2]) -> usize {
        let m = self.samples as i64;
        let wrap = |v: i64| ((v + m / 2).rem_euclid(m)) as usize;
        if self.n == 1 {
            wrap(k[0])
        } else {
            wrap(k[0]) * self.samples + wrap(k[1])
        }
    }

    /// Frequency `xi = 2 pi k / L` of a flat centered spectrum index.
    pub fn frequency(&self, idx: usize) -> Point {
        let k = self.wavenumbers(idx);
        let d = self.dxi();
        [k[0] as f64 * d, k[1] as f64 * d]
    }

    /// Lattice indices of `xi` if it lies on the frequency lattice.
    pub fn lattice_indices(&self, xi: &Point) -> Result<[i64; 2]> {
        let d = self.dxi();
        let mut k = [0i64; 2];
        for a in 0..self.n {
            let r = xi[a] / d;
            let kr = r.round();
            if (r - kr).abs() > 1e-9 * (1.0 + r.abs()) {
                return Err(Error::OffLattice(*xi));
            }
            k[a] = kr as i64;
        }
        if self.n == 1 && xi[1] != 0.0 {
            return Err(Error::OffLattice(*xi));
        }
        Ok(k)
    }

    /// Per-axis grid offsets of `x` if it lies on the spatial grid.
    pub fn grid_offsets(&self, x: &Point) -> Result<[i64; 2]> {
        let h = self.h();
        let mut k = [0i64; 2];
        for a in 0..self.n {
            let r = x[a] / h;
            let kr = r.round();
            if (r - kr).abs() > 1e-9 * (1.0 + r.abs()) {
                return Err(Error::OffGrid(*x));
            }
            k[a] = kr as i64;
        }
        if self.n == 1 && x[1] != 0.0 {
            return Err(Error::OffGrid(*x));
        }
        Ok(k)
    }

    /// Largest dyadic shell index with one shell of headroom under Nyquist.
    pub fn max_shell(&self) -> i64 {
        self.nyquist().log2().floor() as i64 - 1
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn frequencies(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.frequency(i))
    }
}
