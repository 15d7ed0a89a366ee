use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, Field};
use crate::grid::Grid;
use num_complex::Complex64;

const IMAGES_1D: i64 = 1000;
const IMAGES_2D: i64 = 8;
const SUB_2D: usize = 8;

/// `∫_0^u (1+t)^{-L} dt` for `u ≥ 0`, extended oddly.
fn antideriv(u: f64, lexp: f64) -> f64 {
    u.signum() * (1.0 - (1.0 + u.abs()).powf(1.0 - lexp)) / (lexp - 1.0)
}

/// Mass of `R^n (1+R|z|)^{-L}` outside the ball of radius `rho`.
fn tail_mass(n: usize, r: f64, lexp: f64, rho: f64) -> f64 {
    let u = r * rho;
    if n == 1 {
        2.0 * (1.0 + u).powf(1.0 - lexp) / (lexp - 1.0)
    } else {
        // 2π ∫_u^∞ s (1+s)^{-L} ds
        let a = (1.0 + u).powf(2.0 - lexp) / (lexp - 2.0);
        let b = (1.0 + u).powf(1.0 - lexp) / (lexp - 1.0);
        2.0 * std::f64::consts::PI * (a - b)
    }
}

/// Cell-averaged periodized kernel: entry at offset `z` (stored like a
/// field sample at point `z`) is `∫_{cell(z)} Σ_m R^n (1+R|y+mL|)^{-L} dy`.
fn kernel(grid: &Grid, r: f64, lexp: f64) -> Field {
    let (h, len, n) = (grid.h(), grid.length(), grid.dim());
    if n == 1 {
        let rho = (IMAGES_1D as f64 + 0.5) * len;
        let spread = tail_mass(1, r, lexp, rho) * h / len;
        return Field::from_real_fn(*grid, |z| {
            let mut acc = 0.0;
            for m in -IMAGES_1D..=IMAGES_1D {
                let c = z[0] + m as f64 * len;
                acc += antideriv(r * (c + h / 2.0), lexp) - antideriv(r * (c - h / 2.0), lexp);
            }
            acc + spread
        });
    }
    let rho = (IMAGES_2D as f64 + 0.5) * len;
    let spread = tail_mass(2, r, lexp, rho) * h * h / (len * len);
    let rn = r * r;
    Field::from_real_fn(*grid, |z| {
        let mut acc = 0.0;
        for m0 in -IMAGES_2D..=IMAGES_2D {
            for m1 in -IMAGES_2D..=IMAGES_2D {
                let c = [z[0] + m0 as f64 * len, z[1] + m1 as f64 * len];
                let d = (c[0] * c[0] + c[1] * c[1]).sqrt();
                if d > rho {
                    continue;
                }
                if r * d < 8.0 {
                    let s = h / SUB_2D as f64;
                    let mut cell = 0.0;
                    for a in 0..SUB_2D {
                        for b in 0..SUB_2D {
                            let y0 = c[0] - h / 2.0 + (a as f64 + 0.5) * s;
                            let y1 = c[1] - h / 2.0 + (b as f64 + 0.5) * s;
                            cell += (1.0 + r * (y0 * y0 + y1 * y1).sqrt()).powf(-lexp);
                        }
                    }
                    acc += rn * cell * s * s;
                } else {
                    acc += rn * (1.0 + r * d).powf(-lexp) * h * h;
                }
            }
        }
        acc + spread
    })
}

/// `S_R f(x) = R^n ∫ |f(y)| (1+R|x-y|)^{-L} dy` on the torus, by FFT convolution
/// with the cell-averaged periodized kernel.
pub fn peak_operator(f: &Field, r: f64, lexp: f64) -> Result<Field> {
    let g = *f.grid();
    if !(lexp > g.dim() as f64) {
        return Err(Error::OutOfRange(format!("decay exponent {lexp} must exceed n = {}", g.dim())));
    }
    if !(r >= 1.0) {
        return Err(Error::OutOfRange(format!("scale R = {r} must be >= 1")));
    }
    Ok(convolve_abs(f, &kernel(&g, r, lexp)))
}

/// `Σ_y |f(y)| W(x - y)`; `W` already carries the cell measure.
fn convolve_abs(f: &Field, w: &Field) -> Field {
    let g = *f.grid();
    let a = forward_transform(&f.abs());
    let b = forward_transform(w);
    let mut prod = a.clone();
    for (p, q) in prod.coeffs_mut().iter_mut().zip(b.coeffs()) {
        *p *= q;
    }
    let c = 1.0 / g.cell();
    inverse_transform(&prod).map(|z| Complex64::new(z.re * c, 0.0))
}

/// `Σ_y |f(y)| W(x - y)` by direct summation, for tests.
#[doc(hidden)]
pub fn peak_operator_direct(f: &Field, r: f64, lexp: f64) -> Field {
    let g = *f.grid();
    let w = kernel(&g, r, lexp);
    let m = g.samples();
    Field::from_fn(g, |x| {
        let xi = g.grid_offsets(x).expect("grid point");
        let mut acc = 0.0;
        for j in 0..g.len() {
            let y = g.split(j);
            let xo = [(xi[0] + (m / 2) as i64).rem_euclid(m as i64) as usize, (xi[1] + (m / 2) as i64).rem_euclid(m as i64) as usize];
            let mut d = [0usize; 2];
            for a in 0..g.dim() {
                d[a] = (xo[a] + m + m / 2 - y[a]) % m;
            }
            acc += f.samples()[j].norm() * w.samples()[g.join(d)].re;
        }
        Complex64::new(acc, 0.0)
    })
}
