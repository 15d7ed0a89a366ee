use rayon::prelude::*;

use super::apply::apply_fast;
use super::decompose::{decompose, DecomposedSymbol};
use super::peak::peak_operator;
use super::symbol::{SymbolKind, SymbolSpec};
use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, lp_norm, Field};
use crate::grid::{norm, Point};
use crate::partitions::{DyadicPartition, UniformPartition};
use crate::spaces::dual_pairing;
use num_complex::Complex64;

/// `sup_x L(x) / R(x)` for `L = (Σ_ν |φ(R^{-1}(D-ν))f|²)^{1/2}` and
/// `R = R^{n/2} S_R(|f|²)^{1/2}` (decay exponent `n + 1`). Points where
/// both sides vanish are skipped.
pub fn lemma31_check(f: &Field, unif: &UniformPartition, r: f64) -> Result<f64> {
    let g = *f.grid();
    let n = g.dim();
    let spec = forward_transform(f);
    let support = spec.support();
    if support.is_empty() {
        return Ok(0.0);
    }
    // ν with φ((ξ - ν)/R) ≠ 0 somewhere on the support
    let mut lo = [i64::MAX; 2];
    let mut hi = [i64::MIN; 2];
    for &i in &support {
        let xi = g.frequency(i);
        for a in 0..n {
            lo[a] = lo[a].min((xi[a] - r).floor() as i64);
            hi[a] = hi[a].max((xi[a] + r).ceil() as i64);
        }
    }
    if n == 1 {
        lo[1] = 0;
        hi[1] = 0;
    }
    let mut nus = Vec::new();
    for a in lo[0]..=hi[0] {
        for b in lo[1]..=hi[1] {
            nus.push([a, b]);
        }
    }
    let pieces: Vec<Vec<f64>> = nus
        .par_iter()
        .map(|nu| {
            let s = spec.multiply(|xi| unif.phi(&[(xi[0] - nu[0] as f64) / r, (xi[1] - nu[1] as f64) / r]));
            inverse_transform(&s).samples().iter().map(|z| z.norm_sqr()).collect()
        })
        .collect();
    let mut lhs = vec![0.0; g.len()];
    for p in &pieces {
        for (a, v) in lhs.iter_mut().zip(p) {
            *a += v;
        }
    }
    let sq = f.map(|z| Complex64::new(z.norm_sqr(), 0.0));
    let s = peak_operator(&sq, r, n as f64 + 1.0)?;
    let scale = r.powf(n as f64 / 2.0);
    let mut worst: f64 = 0.0;
    for (l, sr) in lhs.iter().zip(s.samples()) {
        let rhs = scale * sr.re.max(0.0).sqrt();
        if rhs > 0.0 {
            worst = worst.max(l.sqrt() / rhs);
        }
    }
    Ok(worst)
}

/// `sup_{x, ξ1, ξ2} |σ_{j,K,Ν}|` over the grid and the frequency lattice.
pub fn piece_sup(piece: &DecomposedSymbol, grid: &crate::grid::Grid) -> Result<f64> {
    let freqs: Vec<Point> = grid.frequencies().collect();
    match &piece.piece.kind {
        SymbolKind::TensorRank(terms) if terms.len() == 1 => {
            let t = &terms[0];
            let a = t.a.sample(grid)?.max_abs();
            let b = freqs.iter().map(|xi| (t.b)(xi).norm()).fold(0.0, f64::max);
            let c = freqs.iter().map(|xi| (t.c)(xi).norm()).fold(0.0, f64::max);
            Ok(a * b * c)
        }
        _ => {
            let xs: Vec<Point> = grid.points().collect();
            let s = &piece.piece;
            Ok(xs
                .par_iter()
                .map(|x| {
                    let mut top: f64 = 0.0;
                    for a in &freqs {
                        for b in &freqs {
                            top = top.max(s.eval(x, a, b).norm());
                        }
                    }
                    top
                })
                .reduce(|| 0.0, f64::max))
        }
    }
}

/// `sup_x |T_piece(f1, f2)(x)| / (S f1(x) S f2(x))` with `S = S_1`, decay `n + 1`.
pub fn pointwise_piece_ratio(piece: &DecomposedSymbol, f1: &Field, f2: &Field) -> Result<f64> {
    let t = apply_fast(&piece.piece, f1, f2)?;
    let n = f1.grid().dim() as f64;
    let s1 = peak_operator(f1, 1.0, n + 1.0)?;
    let s2 = peak_operator(f2, 1.0, n + 1.0)?;
    let mut worst: f64 = 0.0;
    for (i, v) in t.samples().iter().enumerate() {
        let d = s1.samples()[i].re * s2.samples()[i].re;
        if d > 0.0 {
            worst = worst.max(v.norm() / d);
        }
    }
    Ok(worst)
}

/// `⟨T_piece(f1, f2), g⟩`.
pub fn trilinear_form(piece: &DecomposedSymbol, f1: &Field, f2: &Field, g: &Field) -> Result<Complex64> {
    if !f1.grid().same_as(g.grid()) {
        return Err(Error::GridMismatch);
    }
    dual_pairing(&apply_fast(&piece.piece, f1, f2)?, g)
}

/// Relative `l²` spectral mass of `T_piece(f1, f2)` outside
/// `ν1 + ν2 + [-2^{j+2}, 2^{j+2}]^n` (periodic distance on the lattice).
pub fn support_check(piece: &DecomposedSymbol, f1: &Field, f2: &Field) -> Result<f64> {
    let t = apply_fast(&piece.piece, f1, f2)?;
    let g = *t.grid();
    let s = forward_transform(&t);
    let centre = [(piece.nu[0][0] + piece.nu[1][0]) as f64, (piece.nu[0][1] + piece.nu[1][1]) as f64];
    let half = 2f64.powi(piece.j as i32 + 2);
    let period = 2.0 * g.nyquist();
    let (mut out, mut total) = (0.0, 0.0);
    for (i, c) in s.coeffs().iter().enumerate() {
        let xi = g.frequency(i);
        let w = c.norm_sqr();
        total += w;
        let outside = (0..g.dim()).any(|a| {
            let d = (xi[a] - centre[a] + period / 2.0).rem_euclid(period) - period / 2.0;
            d.abs() > half + 1e-9
        });
        if outside {
            out += w;
        }
    }
    Ok(if total == 0.0 { 0.0 } else { (out / total).sqrt() })
}

/// One `ν1` row of the finite-`Λ` sums: `Σ_{ν2} |⟨T_{σ_{j,K,(ν1,ν2)}}(f1, f2), g⟩|`
/// together with `‖φ̃(D-ν1) f1‖_{L²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrilinearRow {
    pub nu1: [i64; 2],
    pub sum: f64,
    pub local_norm: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn trilinear_rows(
    sigma: &SymbolSpec,
    part: &DyadicPartition,
    unif: &UniformPartition,
    j: usize,
    k: [usize; 2],
    nu1s: &[[i64; 2]],
    nu2s: &[[i64; 2]],
    f1: &Field,
    f2: &Field,
    g: &Field,
) -> Result<Vec<TrilinearRow>> {
    let grid = *f1.grid();
    let s1 = forward_transform(f1);
    nu1s.iter()
        .map(|&nu1| {
            let sums = nu2s
                .par_iter()
                .map(|&nu2| {
                    let piece = decompose(sigma, part, unif, &grid, j, k, [nu1, nu2])?;
                    Ok(trilinear_form(&piece, f1, f2, g)?.norm())
                })
                .collect::<Result<Vec<f64>>>()?;
            let local = inverse_transform(&s1.multiply(|xi| unif.phi_tilde_at(nu1, xi)));
            Ok(TrilinearRow { nu1, sum: sums.iter().sum(), local_norm: lp_norm(&local, 2.0)? })
        })
        .collect()
}

/// Spectral mass of `f` at frequencies with `|ξ| > radius`, relative.
pub fn spectral_mass_outside(f: &Field, radius: f64) -> f64 {
    let g = *f.grid();
    let s = forward_transform(f);
    let (mut out, mut total) = (0.0, 0.0);
    for (i, c) in s.coeffs().iter().enumerate() {
        let w = c.norm_sqr();
        total += w;
        if norm(&g.frequency(i)) > radius {
            out += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (out / total).sqrt()
    }
}
