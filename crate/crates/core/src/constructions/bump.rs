use super::families::even_inverse_1d;
use crate::error::{Error, Result};
use crate::grid::{Grid, Point};
use crate::partitions::cutoff;

const HALF_WIDTH: f64 = 0.25;

fn profile(t: f64) -> f64 {
    cutoff(t.abs(), 0.0, HALF_WIDTH)
}

/// Tensor bump `φ(ξ) = c Π φ_1(ξ_i)` with `supp φ ⊂ [-1/4, 1/4]^n`, scaled so that
/// `|F⁻¹φ| ≥ 1` on `[-1, 1]^n` at every grid point.
#[derive(Debug, Clone, Copy)]
pub struct ScaledBump {
    n: usize,
    scale: f64,
}

impl ScaledBump {
    pub fn for_grid(grid: &Grid) -> Result<Self> {
        let n = grid.dim();
        let unscaled = |y: f64| even_inverse_1d(&profile, 0.0, HALF_WIDTH, y);
        // Φ_1 is even and decreasing on [0, 1], so the minimum over the cube sits at
        // the grid point closest to 1 in every coordinate (we just scan them all).
        let mut min = unscaled(1.0);
        let h = grid.h();
        let steps = (1.0 / h).floor() as i64;
        for i in 0..=steps {
            min = min.min(unscaled(i as f64 * h).abs());
        }
        if !(min > 0.0) {
            return Err(Error::NonFinite("bump inverse transform vanishes on [-1, 1]".into()));
        }
        let scale = 1.001 / min.powi(n as i32);
        let b = Self { n, scale };
        let worst = (0..=steps).map(|i| b.inverse_1d(i as f64 * h).abs()).fold(f64::INFINITY, f64::min);
        assert!(worst.powi(n as i32) >= 1.0 - 1e-12, "scaled bump below 1 on the unit cube");
        Ok(b)
    }

    fn axis_scale(&self) -> f64 {
        self.scale.powf(1.0 / self.n as f64)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn half_width(&self) -> f64 {
        HALF_WIDTH
    }

    /// `φ(ξ)`.
    pub fn phi(&self, xi: &Point) -> f64 {
        (0..self.n).map(|i| profile(xi[i])).product::<f64>() * self.scale
    }

    fn inverse_1d(&self, y: f64) -> f64 {
        self.axis_scale() * even_inverse_1d(&profile, 0.0, HALF_WIDTH, y)
    }

    /// `Φ(x) = F⁻¹φ(x)` by quadrature.
    pub fn inverse(&self, x: &Point) -> f64 {
        (0..self.n).map(|i| self.inverse_1d(x[i])).product()
    }
}

/// `φ̃ = 1` on `supp φ`, `supp φ̃ ⊂ [-1/2, 1/2]^n`.
pub fn bump_tilde(xi: &Point, n: usize) -> f64 {
    (0..n).map(|i| cutoff(xi[i].abs(), HALF_WIDTH, 0.5)).product()
}
