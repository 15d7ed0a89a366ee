use std::sync::Arc;

use super::symbol::{RankTerm, SymbolKind, SymbolSpec, XFactor};
use crate::error::Result;
use crate::field::{forward_transform, inverse_transform};
use crate::grid::{Grid, Point};
use crate::partitions::{DyadicPartition, UniformPartition};
use num_complex::Complex64;

/// The piece `σ_{j,K,Ν} = [ψ_j(D_x)σ] ψ_{k1}(ξ1) ψ_{k2}(ξ2) φ(ξ1-ν1) φ(ξ2-ν2)`.
#[derive(Debug, Clone)]
pub struct DecomposedSymbol {
    pub j: usize,
    pub k: [usize; 2],
    pub nu: [[i64; 2]; 2],
    pub piece: SymbolSpec,
}

impl DecomposedSymbol {
    /// Whether `(ξ1, ξ2)` lies in `(ν1, ν2) + [-1, 1]^{2n}` and in both dyadic shells.
    pub fn in_declared_support(&self, part: &DyadicPartition, xi1: &Point, xi2: &Point) -> bool {
        let near = |xi: &Point, nu: &[i64; 2]| (0..2).all(|a| (xi[a] - nu[a] as f64).abs() <= 1.0);
        near(xi1, &self.nu[0]) && near(xi2, &self.nu[1]) && part.psi(self.k[0], xi1) != 0.0
            && part.psi(self.k[1], xi2) != 0.0
    }
}

fn cutoffs(
    part: &DyadicPartition,
    unif: &UniformPartition,
    k: usize,
    nu: [i64; 2],
) -> impl Fn(&Point) -> f64 + Send + Sync + 'static {
    let (part, unif) = (part.clone(), *unif);
    move |xi| {
        let a = unif.phi_at(nu, xi);
        if a == 0.0 {
            0.0
        } else {
            a * part.psi(k, xi)
        }
    }
}

/// Builds one piece of the decomposition. `ψ_j(D_x)` acts by FFT on `grid`.
#[allow(clippy::too_many_arguments)]
pub fn decompose(
    sigma: &SymbolSpec,
    part: &DyadicPartition,
    unif: &UniformPartition,
    grid: &Grid,
    j: usize,
    k: [usize; 2],
    nu: [[i64; 2]; 2],
) -> Result<DecomposedSymbol> {
    let c1 = Arc::new(cutoffs(part, unif, k[0], nu[0]));
    let c2 = Arc::new(cutoffs(part, unif, k[1], nu[1]));
    let name = format!("{}[j={j},k={k:?},nu={nu:?}]", sigma.name);
    let piece = match &sigma.kind {
        SymbolKind::Multiplier(m) => {
            // x-independent: only the j = 0 block survives, with ψ_0(0) = 1
            let m = m.clone();
            let keep = if j == 0 { 1.0 } else { 0.0 };
            SymbolSpec::multiplier(name, sigma.class, move |a, b| {
                let w = keep * c1(a);
                if w == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let w = w * c2(b);
                if w == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    m(a, b) * w
                }
            })
        }
        SymbolKind::TensorRank(terms) => {
            let terms = terms
                .iter()
                .map(|t| {
                    let a = t.a.sample(grid)?;
                    let aj = inverse_transform(&forward_transform(&a).multiply(|xi| part.psi(j, xi)));
                    let (b, c) = (t.b.clone(), t.c.clone());
                    let (c1, c2) = (c1.clone(), c2.clone());
                    Ok(RankTerm::new(XFactor::Sampled(aj), move |xi| b(xi) * c1(xi), move |xi| c(xi) * c2(xi)))
                })
                .collect::<Result<Vec<_>>>()?;
            SymbolSpec::tensor(name, sigma.class, terms)
        }
    };
    Ok(DecomposedSymbol { j, k, nu, piece })
}

/// Integer `ν` whose cell `ν + [-1, 1]^n` meets the Nyquist box of `grid`.
pub fn nu_window(grid: &Grid) -> Vec<[i64; 2]> {
    let r = grid.nyquist().floor() as i64 + 1;
    let mut out = Vec::new();
    for a in -r..=r {
        if grid.dim() == 1 {
            out.push([a, 0]);
        } else {
            for b in -r..=r {
                out.push([a, b]);
            }
        }
    }
    out
}

/// Integer `ν` whose cell meets shell `k` of `part`.
pub fn nu_window_for_shell(grid: &Grid, part: &DyadicPartition, k: usize) -> Vec<[i64; 2]> {
    let outer = part.support_radius(k) + 1.0;
    let inner = if k == 0 { 0.0 } else { part.support_radius(k) / 4.0 - 2.0 };
    nu_window(grid)
        .into_iter()
        .filter(|nu| {
            let r = ((nu[0] * nu[0] + nu[1] * nu[1]) as f64).sqrt();
            r <= outer && r >= inner
        })
        .collect()
}
