use rayon::prelude::*;

use super::symbol::{SymbolKind, SymbolSpec};
use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, Field, Spectrum, ZERO};
use crate::grid::{Grid, Point};
use num_complex::Complex64;

/// Largest grids the literal quadrature accepts.
pub const DIRECT_MAX_1D: usize = 512;
pub const DIRECT_MAX_2D: usize = 64;

fn check_grids(f1: &Field, f2: &Field) -> Result<Grid> {
    if !f1.grid().same_as(f2.grid()) {
        return Err(Error::GridMismatch);
    }
    Ok(*f1.grid())
}

/// Nonzero coefficients with their frequencies.
fn sparse(s: &Spectrum) -> (Vec<Point>, Vec<Complex64>) {
    let g = s.grid();
    s.support().into_iter().map(|i| (g.frequency(i), s.coeffs()[i])).unzip()
}

/// Literal quadrature
/// `T(x) = (2π)^{-2n} dξ^{2n} Σ_{ξ1, ξ2} e^{ix(ξ1+ξ2)} σ(x, ξ1, ξ2) f̂1(ξ1) f̂2(ξ2)`.
pub fn apply_direct(sigma: &SymbolSpec, f1: &Field, f2: &Field) -> Result<Field> {
    let g = check_grids(f1, f2)?;
    let limit = if g.dim() == 1 { DIRECT_MAX_1D } else { DIRECT_MAX_2D };
    if g.samples() > limit {
        return Err(Error::DirectTooLarge(g.samples()));
    }
    let (xi1, c1) = sparse(&forward_transform(f1));
    let (xi2, c2) = sparse(&forward_transform(f2));
    let w = g.dual_cell() * g.dual_cell();
    // x-independent parts of the summand, tabulated once
    let table: Vec<Vec<Complex64>> = match &sigma.kind {
        SymbolKind::Multiplier(m) => {
            xi1.par_iter().zip(&c1).map(|(a, ca)| xi2.iter().zip(&c2).map(|(b, cb)| m(a, b) * ca * cb).collect()).collect()
        }
        SymbolKind::TensorRank(_) => Vec::new(),
    };
    let out: Vec<Complex64> = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let x = g.point(i);
            let e1: Vec<Complex64> = xi1.iter().map(|a| Complex64::from_polar(1.0, x[0] * a[0] + x[1] * a[1])).collect();
            let e2: Vec<Complex64> = xi2.iter().map(|b| Complex64::from_polar(1.0, x[0] * b[0] + x[1] * b[1])).collect();
            let mut acc = ZERO;
            match &sigma.kind {
                SymbolKind::Multiplier(_) => {
                    for (p, row) in table.iter().enumerate() {
                        let mut inner = ZERO;
                        for (q, v) in row.iter().enumerate() {
                            inner += v * e2[q];
                        }
                        acc += inner * e1[p];
                    }
                }
                SymbolKind::TensorRank(terms) => {
                    for t in terms {
                        let ax = t.a.eval(&x);
                        if ax == ZERO {
                            continue;
                        }
                        // the ξ1 and ξ2 sums separate for a rank-one term
                        let left: Complex64 = xi1.iter().enumerate().map(|(p, a)| (t.b)(a) * c1[p] * e1[p]).sum();
                        let right: Complex64 = xi2.iter().enumerate().map(|(q, b)| (t.c)(b) * c2[q] * e2[q]).sum();
                        acc += ax * left * right;
                    }
                }
            }
            acc * w
        })
        .collect();
    Field::new(g, out)
}

/// Relative size below which transform round-off is treated as an exact zero.
pub const FLUSH: f64 = 64.0 * f64::EPSILON;

fn flushed(mut s: Spectrum) -> Spectrum {
    let top = s.coeffs().iter().fold(0.0f64, |a, c| a.max(c.norm()));
    for c in s.coeffs_mut() {
        if c.norm() <= FLUSH * top {
            *c = ZERO;
        }
    }
    s
}

/// Wavenumber bounding box `[lo, hi]` per axis of the nonzero coefficients.
fn bounding_box(s: &Spectrum) -> Option<[[i64; 2]; 2]> {
    let g = s.grid();
    let mut lo = [i64::MAX; 2];
    let mut hi = [i64::MIN; 2];
    let mut any = false;
    for i in s.support() {
        let k = g.wavenumbers(i);
        for a in 0..2 {
            lo[a] = lo[a].min(k[a]);
            hi[a] = hi[a].max(k[a]);
        }
        any = true;
    }
    any.then_some([lo, hi])
}

/// Unwrapped preimages `o + tM` of wrapped wavenumber `o` inside `[lo, hi]`.
fn preimages(o: i64, m: i64, lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    let first = o + m * (lo - o).div_euclid(m) + if (lo - o).rem_euclid(m) == 0 { 0 } else { m };
    (0..).map(move |t| first + t * m).take_while(move |&z| z <= hi)
}

/// Fast evaluation. Multipliers are summed in frequency over the output
/// lattice (the same discrete sum as [`apply_direct`], after coefficients below
/// [`FLUSH`] times the largest one are dropped); tensor terms
/// use `Σ_r a_r(x) (b_r(D)f1)(x) (c_r(D)f2)(x)`.
pub fn apply_fast(sigma: &SymbolSpec, f1: &Field, f2: &Field) -> Result<Field> {
    let g = check_grids(f1, f2)?;
    let s1 = forward_transform(f1);
    let s2 = forward_transform(f2);
    match &sigma.kind {
        SymbolKind::Multiplier(m) => {
            let (s1, s2) = (flushed(s1), flushed(s2));
            let (Some(b1), Some(b2)) = (bounding_box(&s1), bounding_box(&s2)) else {
                return Ok(Field::zeros(g));
            };
            let mm = g.samples() as i64;
            let dxi = g.dxi();
            let dim = g.dim();
            let w = g.dual_cell();
            let freq = |k: [i64; 2]| -> Point { [k[0] as f64 * dxi, k[1] as f64 * dxi] };
            let coeff = |s: &Spectrum, k: [i64; 2]| s.coeffs()[g.index_of_wavenumbers(k)];
            let out: Vec<Complex64> = (0..g.len())
                .into_par_iter()
                .map(|o| {
                    let ko = g.wavenumbers(o);
                    let mut acc = ZERO;
                    let z0s: Vec<i64> = preimages(ko[0], mm, b1[0][0] + b2[0][0], b1[1][0] + b2[1][0]).collect();
                    let z1s: Vec<i64> = if dim == 2 {
                        preimages(ko[1], mm, b1[0][1] + b2[0][1], b1[1][1] + b2[1][1]).collect()
                    } else {
                        vec![0]
                    };
                    for &z0 in &z0s {
                        for &z1 in &z1s {
                            let (a0lo, a0hi) = (b1[0][0].max(z0 - b2[1][0]), b1[1][0].min(z0 - b2[0][0]));
                            let (a1lo, a1hi) = if dim == 2 {
                                (b1[0][1].max(z1 - b2[1][1]), b1[1][1].min(z1 - b2[0][1]))
                            } else {
                                (0, 0)
                            };
                            for a0 in a0lo..=a0hi {
                                for a1 in a1lo..=a1hi {
                                    let k1 = [a0, a1];
                                    let c1 = coeff(&s1, k1);
                                    if c1 == ZERO {
                                        continue;
                                    }
                                    let k2 = [z0 - a0, if dim == 2 { z1 - a1 } else { 0 }];
                                    let c2 = coeff(&s2, k2);
                                    if c2 == ZERO {
                                        continue;
                                    }
                                    acc += m(&freq(k1), &freq(k2)) * c1 * c2;
                                }
                            }
                        }
                    }
                    acc * w
                })
                .collect();
            Ok(inverse_transform(&Spectrum::new(g, out)?))
        }
        SymbolKind::TensorRank(terms) => {
            let mut out = vec![ZERO; g.len()];
            for t in terms {
                let a = t.a.sample(&g)?;
                let u = inverse_transform(&multiply_complex(&s1, |xi| (t.b)(xi)));
                let v = inverse_transform(&multiply_complex(&s2, |xi| (t.c)(xi)));
                for (i, o) in out.iter_mut().enumerate() {
                    *o += a.samples()[i] * u.samples()[i] * v.samples()[i];
                }
            }
            Field::new(g, out)
        }
    }
}

pub(crate) fn multiply_complex(s: &Spectrum, m: impl Fn(&Point) -> Complex64 + Sync) -> Spectrum {
    let g = *s.grid();
    let coeffs =
        s.coeffs().par_iter().enumerate().map(|(i, &c)| if c == ZERO { ZERO } else { c * m(&g.frequency(i)) }).collect();
    Spectrum::new(g, coeffs).expect("same layout")
}
