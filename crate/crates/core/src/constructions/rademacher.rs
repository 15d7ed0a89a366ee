use std::collections::BTreeMap;
use std::f64::consts::E;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bump::{bump_tilde, ScaledBump};
use super::constants::smallest_constants;
use super::families::{guarded, FamilyInstance, FamilyParam, FamilyTag, Reference};
use crate::error::{Error, Result};
use crate::field::{inverse_transform, Spectrum};
use crate::grid::{Grid, Point};
use crate::operator::{SymbolClass, SymbolSpec};
use num_complex::Complex64;

/// Data truncation `|μ| ≤ μ_max` used when the grid allows it.
pub const RADEMACHER_MU_MAX: i64 = 60;

/// Default half-width of the explicit part of the `d_ν` sum.
pub const DNU_TRUNCATION: i64 = 1 << 16;

/// `⟨μ⟩ = e + |μ|`.
pub fn bracket(mu: f64) -> f64 {
    E + mu.abs()
}

/// `⟨μ⟩^{-1/2} (log⟨μ⟩)^{-(1+ε)/2}`, the one-dimensional data coefficient.
pub fn data_weight(mu: f64, epsilon: f64) -> f64 {
    let b = bracket(mu);
    b.powf(-0.5) * b.ln().powf(-(1.0 + epsilon) / 2.0)
}

fn summand(nu: f64, mu: f64, epsilon: f64) -> f64 {
    (1.0 + (nu - mu).abs() + mu.abs()).powf(-0.5) * data_weight(nu - mu, epsilon) * data_weight(mu, epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dnu {
    /// Sum over `|μ - ν/2| ≤ T`.
    pub explicit: f64,
    /// Estimate of the remaining two half-lines.
    pub tail: f64,
}

impl Dnu {
    pub fn value(&self) -> f64 {
        self.explicit + self.tail
    }
}

/// `d_ν = Σ_μ (1+|ν-μ|+|μ|)^{-1/2} w(ν-μ) w(μ)` for `n = 1`.
///
/// The summand is invariant under `μ ↦ ν - μ`, so the window `|μ - ν/2| ≤ T` is
/// symmetric. The two tails are replaced by the integral of the summand from the
/// window edge (shifted by half a step) to infinity, via `μ - ν/2 = (T+1/2) e^u`.
pub fn dnu(nu: i64, epsilon: f64, truncation: i64) -> Result<Dnu> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidExponent(format!("epsilon = {epsilon} must be positive")));
    }
    if truncation < 1 {
        return Err(Error::OutOfRange(format!("truncation {truncation} < 1")));
    }
    let nuf = nu as f64;
    let centre = nuf / 2.0;
    let lo = (centre - truncation as f64).ceil() as i64;
    let hi = (centre + truncation as f64).floor() as i64;
    let explicit: f64 = (lo..=hi).map(|m| summand(nuf, m as f64, epsilon)).sum();
    let edge_right = hi as f64 + 0.5 - centre;
    let edge_left = centre - (lo as f64 - 0.5);
    let tail = half_line(nuf, centre, edge_right, 1.0, epsilon) + half_line(nuf, centre, edge_left, -1.0, epsilon);
    Ok(Dnu { explicit, tail })
}

fn half_line(nu: f64, centre: f64, edge: f64, dir: f64, epsilon: f64) -> f64 {
    const U_MAX: f64 = 90.0;
    const STEPS: usize = 6000;
    let du = U_MAX / STEPS as f64;
    let g = |u: f64| {
        let r = edge * u.exp();
        summand(nu, centre + dir * r, epsilon) * r
    };
    // Simpson
    let mut acc = g(0.0) + g(U_MAX);
    for i in 1..STEPS {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(i as f64 * du);
    }
    acc * du / 3.0
}

/// `d_ν` restricted to `|μ| ≤ μ_max` and `|ν - μ| ≤ μ_max`, matching data truncated to
/// `|μ| ≤ μ_max`.
pub fn dnu_truncated(nu: i64, epsilon: f64, mu_max: i64) -> f64 {
    let lo = (nu - mu_max).max(-mu_max);
    let hi = (nu + mu_max).min(mu_max);
    (lo..=hi).map(|m| summand(nu as f64, m as f64, epsilon)).sum()
}

/// `Λ_k = {ν ∈ Z : 2^{k-1/8} ≤ |ν| ≤ 2^{k+1/8}}`, sorted.
pub fn lambda_shell(k: u32) -> Vec<i64> {
    let lo = 2f64.powf(k as f64 - 0.125);
    let hi = 2f64.powf(k as f64 + 0.125);
    let a = lo.ceil() as i64;
    let b = hi.floor() as i64;
    let mut v: Vec<i64> = (a..=b).map(|x| -x).collect();
    v.reverse();
    v.extend(a..=b);
    v
}

/// The shells `Λ_k`, `k0 ≤ k ≤ k_max`, with their `d_ν` tables.
#[derive(Debug, Clone)]
pub struct IndexSets {
    pub k0: u32,
    pub shells: BTreeMap<u32, Vec<i64>>,
    pub dnu: BTreeMap<i64, f64>,
}

impl IndexSets {
    pub fn new(k_max: u32, epsilon: f64, truncation: i64) -> Result<Self> {
        let k0 = smallest_constants(1).k0;
        if k_max < k0 {
            return Err(Error::OutOfRange(format!("k_max = {k_max} below k0 = {k0}")));
        }
        let shells: BTreeMap<u32, Vec<i64>> = (k0..=k_max).map(|k| (k, lambda_shell(k))).collect();
        let nus: Vec<i64> = shells.values().flatten().copied().collect();
        let vals = nus
            .par_iter()
            .map(|&nu| dnu(nu, epsilon, truncation).map(|d| (nu, d.value())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { k0, shells, dnu: vals.into_iter().collect() })
    }

    pub fn shell(&self, k: u32) -> &[i64] {
        self.shells.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `Σ_{ν ∈ Λ_k} d_ν²`.
    pub fn shell_energy(&self, k: u32) -> f64 {
        self.shell(k).iter().map(|nu| self.dnu[nu].powi(2)).sum()
    }
}

/// Independent `±1` signs `r_ν`, drawn in increasing `ν` order.
pub fn rademacher_signs(seed: u64, nus: &[i64]) -> BTreeMap<i64, f64> {
    let mut sorted = nus.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sorted
        .into_iter()
        .map(|nu| (nu, if rng.gen::<bool>() { 1.0 } else { -1.0 }))
        .collect()
}

/// Largest shell index whose output modes stay below the grid's Nyquist frequency.
pub fn rademacher_k_max(grid: &Grid) -> u32 {
    let top = grid.nyquist() - 1.0;
    if top <= 1.0 {
        return 0;
    }
    (top.log2() - 0.25).floor().max(0.0) as u32
}

/// Data truncation used by [`rademacher_family`] on `grid`.
pub fn rademacher_mu_max(grid: &Grid) -> i64 {
    (((grid.nyquist() - 2.0) / 2.0).floor() as i64).min(RADEMACHER_MU_MAX)
}

/// Random-sign symbol `σ_ω` with data `f_1 = f_2`, `n = 1`.
///
/// The grid must put the integers on the frequency lattice (`L ∈ 2πZ`). The data
/// is truncated to `|μ| ≤ μ_max`, the smaller of [`RADEMACHER_MU_MAX`] and the largest
/// value with `2 μ_max + 2 ≤ Nyquist`, so the reference is
/// built from the matching truncated `d_ν`.
pub fn rademacher_family(seed: u64, epsilon: f64, grid: &Grid) -> Result<FamilyInstance> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidExponent(format!("epsilon = {epsilon} must be positive")));
    }
    if grid.dim() != 1 {
        return Err(Error::Unsupported("rademacher family is implemented for n = 1".into()));
    }
    let per = grid.length() / (2.0 * std::f64::consts::PI);
    if (per - per.round()).abs() > 1e-9 || per.round() < 1.0 {
        return Err(Error::InvalidGrid("rademacher family needs L ∈ 2πZ".into()));
    }
    let k0 = smallest_constants(1).k0;
    let k_max = rademacher_k_max(grid);
    if k_max < k0 {
        return Err(Error::GridTooCoarse(format!("k_max = {k_max} below k0 = {k0}")));
    }
    let nus: Vec<i64> = (k0..=k_max).flat_map(lambda_shell).collect();
    let signs = Arc::new(rademacher_signs(seed, &nus));
    let bump = ScaledBump::for_grid(grid)?;
    let mu_max = rademacher_mu_max(grid);

    let sigma_signs = Arc::clone(&signs);
    let sigma = SymbolSpec::real_multiplier("rademacher", SymbolClass::Joint(-0.5), move |a, b| {
        // the φ̃(· - ν_i) are disjointly supported: only the nearest integers contribute
        let (n1, n2) = (a[0].round(), b[0].round());
        let Some(r) = sigma_signs.get(&((n1 + n2) as i64)) else {
            return 0.0;
        };
        let w = (1.0 + n1.abs() + n2.abs()).powf(-0.5);
        r * w * bump_tilde(&[a[0] - n1, 0.0], 1) * bump_tilde(&[b[0] - n2, 0.0], 1)
    });

    let f = guarded(Spectrum::from_fn(*grid, |xi| {
        let m = xi[0].round();
        if m.abs() > mu_max as f64 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(data_weight(m, epsilon) * bump.phi(&[xi[0] - m, 0.0]), 0.0)
    }))?;

    let coeffs: Vec<(f64, f64)> = nus
        .iter()
        .filter(|nu| nu.abs() <= 2 * mu_max)
        .map(|&nu| (nu as f64, signs[&nu] * dnu_truncated(nu, epsilon, mu_max)))
        .collect();
    // On the torus the data are built from the periodized Φ; since every e^{iνx} is
    // L-periodic the closed form holds exactly with that Φ at grid points.
    let periodized = inverse_transform(&Spectrum::from_fn(*grid, |xi| Complex64::new(bump.phi(xi), 0.0)));
    let g = *grid;
    let reference: Reference = Arc::new(move |x: &Point| {
        let s: Complex64 = coeffs.iter().map(|&(nu, c)| Complex64::from_polar(c, nu * x[0])).sum();
        let p = match g.grid_offsets(x) {
            Ok(k) => {
                let m = g.samples() as i64;
                periodized.samples()[(k[0] + m / 2).rem_euclid(m) as usize]
            }
            Err(_) => Complex64::new(bump.inverse(x), 0.0),
        };
        s * p * p
    });
    Ok(FamilyInstance {
        tag: FamilyTag::Rademacher,
        param: FamilyParam::Rademacher { seed, epsilon },
        symbol: Some(sigma),
        fields: vec![f.clone(), f],
        reference: Some(reference),
    })
}
