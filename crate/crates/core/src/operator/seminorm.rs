use rayon::prelude::*;

use super::symbol::{SymbolKind, SymbolSpec};
use crate::error::{Error, Result};
use crate::grid::Grid;
use num_complex::Complex64;

/// Sample region for seminorm estimates (one space dimension).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleWindow {
    /// `ξ1, ξ2 ∈ [-xi_max, xi_max]`.
    pub xi_max: f64,
    pub step_xi: f64,
    /// `x ∈ [-period/2, period/2)`; ignored for `x`-independent symbols.
    pub period: f64,
    pub step_x: f64,
}

impl SampleWindow {
    /// Steps `min(0.1, h)` and `min(0.1, dξ)`, `x` over one period of the grid.
    pub fn for_grid(grid: &Grid, xi_max: f64) -> Self {
        Self { xi_max, step_xi: grid.dxi().min(0.1), period: grid.length(), step_x: grid.h().min(0.1) }
    }
}

const PAD: usize = 3;

/// Central differences of order 0..=4 at interior point `i` (4th-order accurate).
fn derivative(v: &[Complex64], i: usize, order: usize, h: f64) -> Complex64 {
    let s = |k: isize| v[(i as isize + k) as usize];
    match order {
        0 => s(0),
        1 => (s(-2) - s(-1) * 8.0 + s(1) * 8.0 - s(2)) / (12.0 * h),
        2 => (-s(-2) + s(-1) * 16.0 - s(0) * 30.0 + s(1) * 16.0 - s(2)) / (12.0 * h * h),
        3 => (s(-3) - s(-2) * 8.0 + s(-1) * 13.0 - s(1) * 13.0 + s(2) * 8.0 - s(3)) / (8.0 * h.powi(3)),
        4 => (-s(-3) + s(-2) * 12.0 - s(-1) * 39.0 + s(0) * 56.0 - s(1) * 39.0 + s(2) * 12.0 - s(3)) / (6.0 * h.powi(4)),
        _ => unreachable!(),
    }
}

/// Derivatives of orders `0..=n` of a 1-d table (with `PAD` ghost points each side).
fn derivative_tables(v: &[Complex64], n: usize, h: f64) -> Vec<Vec<Complex64>> {
    (0..=n).map(|o| (PAD..v.len() - PAD).map(|i| derivative(v, i, o, h)).collect()).collect()
}

fn axis(half: f64, step: f64) -> Vec<f64> {
    let k = (half / step).ceil() as isize;
    (-k - (PAD as isize)..=k + PAD as isize).map(|i| i as f64 * step).collect()
}

fn periodic_axis(period: f64, step: f64) -> (Vec<f64>, f64) {
    let k = (period / step).round().max(1.0) as isize;
    let h = period / k as f64;
    ((-(PAD as isize)..k + PAD as isize).map(|i| -period / 2.0 + i as f64 * h).collect(), h)
}

fn finite_or_err(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("finite differences of the symbol".into()))
    }
}

/// `max_{α, β1, β2 ≤ N} sup |∂_x^α ∂_{ξ1}^{β1} ∂_{ξ2}^{β2} σ| / w(ξ1, ξ2)` over the sample
/// lattice, with the class weight `w`. One space dimension, `N ≤ 4`.
pub fn seminorm_estimate(sigma: &SymbolSpec, order: usize, win: &SampleWindow) -> Result<f64> {
    if order > 4 {
        return Err(Error::OutOfRange(format!("derivative order {order} > 4")));
    }
    let xi = axis(win.xi_max, win.step_xi);
    let inner: Vec<f64> = xi[PAD..xi.len() - PAD].to_vec();
    let weights: Vec<Vec<f64>> =
        inner.iter().map(|&a| inner.iter().map(|&b| sigma.class.weight(&[a, 0.0], &[b, 0.0])).collect()).collect();
    let h = win.step_xi;
    let best = match &sigma.kind {
        SymbolKind::Multiplier(m) => {
            // d^{β2}/dξ2^{β2} along rows, then d^{β1}/dξ1^{β1} down columns
            let rows: Vec<Vec<Vec<Complex64>>> = xi
                .par_iter()
                .map(|&a| {
                    let row: Vec<Complex64> = xi.iter().map(|&b| m(&[a, 0.0], &[b, 0.0])).collect();
                    derivative_tables(&row, order, h)
                })
                .collect();
            let mut best: f64 = 0.0;
            for b2 in 0..=order {
                let cols: Vec<f64> = (0..inner.len())
                    .into_par_iter()
                    .map(|q| {
                        let col: Vec<Complex64> = rows.iter().map(|r| r[b2][q]).collect();
                        let d = derivative_tables(&col, order, h);
                        let mut top: f64 = 0.0;
                        for dt in &d {
                            for (p, v) in dt.iter().enumerate() {
                                top = top.max(v.norm() / weights[p][q]);
                            }
                        }
                        top
                    })
                    .collect();
                best = cols.into_iter().fold(best, f64::max);
            }
            best
        }
        SymbolKind::TensorRank(terms) => {
            let (xs, hx) = periodic_axis(win.period, win.step_x);
            let tab = |f: &dyn Fn(f64) -> Complex64, pts: &[f64], step: f64| {
                derivative_tables(&pts.iter().map(|&t| f(t)).collect::<Vec<_>>(), order, step)
            };
            let parts: Vec<_> = terms
                .iter()
                .map(|t| {
                    (
                        tab(&|x| t.a.eval(&[x, 0.0]), &xs, hx),
                        tab(&|a| (t.b)(&[a, 0.0]), &xi, h),
                        tab(&|b| (t.c)(&[b, 0.0]), &xi, h),
                    )
                })
                .collect();
            let nx = xs.len() - 2 * PAD;
            let mut best: f64 = 0.0;
            for al in 0..=order {
                for b1 in 0..=order {
                    for b2 in 0..=order {
                        let top = if parts.len() == 1 {
                            // rank one: the supremum factorizes
                            let (a, b, c) = &parts[0];
                            let sa = a[al].iter().map(|z| z.norm()).fold(0.0, f64::max);
                            let mut sbc: f64 = 0.0;
                            for (p, vb) in b[b1].iter().enumerate() {
                                for (q, vc) in c[b2].iter().enumerate() {
                                    sbc = sbc.max((vb * vc).norm() / weights[p][q]);
                                }
                            }
                            sa * sbc
                        } else {
                            (0..nx)
                                .into_par_iter()
                                .map(|ix| {
                                    let mut top: f64 = 0.0;
                                    for p in 0..inner.len() {
                                        for q in 0..inner.len() {
                                            let v: Complex64 =
                                                parts.iter().map(|(a, b, c)| a[al][ix] * b[b1][p] * c[b2][q]).sum();
                                            top = top.max(v.norm() / weights[p][q]);
                                        }
                                    }
                                    top
                                })
                                .reduce(|| 0.0, f64::max)
                        };
                        best = best.max(top);
                    }
                }
            }
            best
        }
    };
    finite_or_err(best)
}
