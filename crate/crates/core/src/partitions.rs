//! Littlewood–Paley and frequency-uniform partitions of unity.
//!
//! Every profile is assembled from one closed-form C^∞ smooth step, so the
//! support and value-one sets are exact: evaluation returns literal `0.0`
//! and `1.0` there.

use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, Field};
use crate::grid::{norm, Grid, Point};

/// C^∞ step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, `e(t)/(e(t)+e(1-t))` with `e(t) = exp(-1/t)`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Radial cutoff: 1 for `r ≤ inner`, 0 for `r ≥ outer`.
pub fn cutoff(r: f64, inner: f64, outer: f64) -> f64 {
    1.0 - smooth_step((r - inner) / (outer - inner))
}

/// Bump: 0 outside `(lo_out, hi_out)`, 1 on `[lo_in, hi_in]`.
pub fn plateau(r: f64, lo_out: f64, lo_in: f64, hi_in: f64, hi_out: f64) -> f64 {
    if r <= lo_out || r >= hi_out {
        return 0.0;
    }
    smooth_step((r - lo_out) / (lo_in - lo_out)) * cutoff(r, hi_in, hi_out)
}

/// Odd-symmetric step of half-width `w` centred at 0: `H(t) + H(-t) = 1`.
fn centred_step(t: f64, w: f64) -> f64 {
    smooth_step((t + w) / (2.0 * w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `supp ψ_0 ⊂ {|ξ| ≤ 2}`, `supp ψ_ℓ ⊂ {2^{ℓ-1} ≤ |ξ| ≤ 2^{ℓ+1}}`.
    Standard,
    /// `ψ_0 = 1` on `|ξ| ≤ 2^{1/4}`, `supp ψ_0 ⊂ {|ξ| ≤ 2^{3/4}}`; blocks are
    /// identically 1 on `2^{ℓ-1/4} ≤ |ξ| ≤ 2^{ℓ+1/4}`.
    Sharp,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Flavor::Standard),
            "sharp" => Ok(Flavor::Sharp),
            other => Err(Error::Parse(format!("unknown partition flavor `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicPartition {
    flavor: Flavor,
    max_shell: usize,
    defect: Option<(usize, f64)>,
}

impl DyadicPartition {
    /// Partition without a grid, usable up to shell `max_shell`.
    pub fn with_max_shell(flavor: Flavor, max_shell: usize) -> Self {
        Self {
            flavor,
            max_shell,
            defect: None,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn max_shell(&self) -> usize {
        self.max_shell
    }

    /// Inner radius where `ψ_0` starts to drop, and the radius of its support.
    fn radii(&self) -> (f64, f64) {
        match self.flavor {
            Flavor::Standard => (1.0, 2.0),
            Flavor::Sharp => (2f64.powf(0.25), 2f64.powf(0.75)),
        }
    }

    fn psi0_radial(&self, r: f64) -> f64 {
        let (a, b) = self.radii();
        cutoff(r, a, b)
    }

    /// `ψ_ℓ(ξ)`.
    pub fn psi(&self, l: usize, xi: &Point) -> f64 {
        let r = norm(xi);
        let v = if l == 0 {
            self.psi0_radial(r)
        } else {
            let s = 2f64.powi(-(l as i32));
            self.psi0_radial(s * r) - self.psi0_radial(2.0 * s * r)
        };
        match self.defect {
            Some((dl, amount)) if dl == l && v != 0.0 => v + amount,
            _ => v,
        }
    }

    /// `Σ_{ℓ ≤ ℓ_max} ψ_ℓ(ξ)`.
    pub fn sum(&self, xi: &Point) -> f64 {
        (0..=self.max_shell).map(|l| self.psi(l, xi)).sum()
    }

    /// Radius up to which the truncated sum is identically one.
    pub fn resolved_radius(&self) -> f64 {
        self.radii().0 * 2f64.powi(self.max_shell as i32)
    }

    /// Outer radius of `supp ψ_ℓ`.
    pub fn support_radius(&self, l: usize) -> f64 {
        self.radii().1 * 2f64.powi(l as i32)
    }

    /// Negative control: adds `amount` to `ψ_shell` on its support.
    pub fn corrupted(mut self, shell: usize, amount: f64) -> Self {
        self.defect = Some((shell, amount));
        self
    }
}

/// Builds the dyadic family on `grid`, with `ℓ_max = ⌊log2(πM/L)⌋ - 1`.
pub fn build_dyadic(flavor: Flavor, grid: &Grid) -> Result<DyadicPartition> {
    let lmax = grid.max_shell();
    if lmax < 3 {
        return Err(Error::GridTooCoarse(format!(
            "largest usable shell is {lmax}, at least 3 is required (Nyquist {:.3})",
            grid.nyquist()
        )));
    }
    Ok(DyadicPartition::with_max_shell(flavor, lmax as usize))
}

/// Frequency-uniform partition `{φ(· - ν)}_{ν ∈ Z^n}` and its companion `φ̃`.
///
/// `φ` is the tensor product of `1_{[-1/2,1/2]} * ρ` for an even mollifier `ρ`
/// of half-width 1/4, written as a difference of two shifted smooth steps so
/// that the integer translates telescope to exactly one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformPartition {
    n: usize,
}

impl UniformPartition {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// One-dimensional factor; supported in `[-3/4, 3/4]`, equal to 1 on `[-1/4, 1/4]`.
    pub fn phi_1d(t: f64) -> f64 {
        centred_step(t + 0.5, 0.25) - centred_step(t - 0.5, 0.25)
    }

    /// One-dimensional companion; supported in `[-2, 2]`, equal to 1 on `[-1, 1]`.
    pub fn phi_tilde_1d(t: f64) -> f64 {
        centred_step(t + 1.5, 0.5) - centred_step(t - 1.5, 0.5)
    }

    pub fn phi(&self, xi: &Point) -> f64 {
        let mut v = Self::phi_1d(xi[0]);
        if self.n == 2 {
            v *= Self::phi_1d(xi[1]);
        }
        v
    }

    pub fn phi_tilde(&self, xi: &Point) -> f64 {
        let mut v = Self::phi_tilde_1d(xi[0]);
        if self.n == 2 {
            v *= Self::phi_tilde_1d(xi[1]);
        }
        v
    }

    /// `φ(ξ - ν)`.
    pub fn phi_at(&self, nu: [i64; 2], xi: &Point) -> f64 {
        self.phi(&[xi[0] - nu[0] as f64, xi[1] - nu[1] as f64])
    }

    pub fn phi_tilde_at(&self, nu: [i64; 2], xi: &Point) -> f64 {
        self.phi_tilde(&[xi[0] - nu[0] as f64, xi[1] - nu[1] as f64])
    }

    /// Integer translates `ν` with `ν + [-1, 1]^n` meeting the ball of radius `radius`.
    pub fn window(&self, radius: f64) -> Vec<[i64; 2]> {
        let r = (radius + 1.0).ceil() as i64;
        let mut out = Vec::new();
        for a in -r..=r {
            if self.n == 1 {
                if (a.abs() as f64 - 1.0).max(0.0) <= radius {
                    out.push([a, 0]);
                }
            } else {
                for b in -r..=r {
                    let da = (a.abs() as f64 - 1.0).max(0.0);
                    let db = (b.abs() as f64 - 1.0).max(0.0);
                    if da.hypot(db) <= radius {
                        out.push([a, b]);
                    }
                }
            }
        }
        out
    }
}

pub fn build_uniform(n: usize) -> Result<UniformPartition> {
    if n != 1 && n != 2 {
        return Err(Error::InvalidGrid(format!("dimension {n}")));
    }
    Ok(UniformPartition { n })
}

/// Majorants `ψ̃_k` of the standard family: `ψ̃_k = 1` on `supp ψ_k`,
/// `supp ψ̃_0 ⊂ {|ξ| ≤ 4}`, `supp ψ̃_k ⊂ {2^{k-2} ≤ |ξ| ≤ 2^{k+2}}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MajorantFamily;

impl MajorantFamily {
    pub fn psi_tilde(&self, k: usize, xi: &Point) -> f64 {
        let r = norm(xi);
        let base = |t: f64| cutoff(t, 1.0, 2.0);
        let up = base(r * 2f64.powi(-(k as i32) - 1));
        if k == 0 {
            up
        } else {
            up - base(r * 2f64.powi(2 - k as i32))
        }
    }
}

/// Where a profile is placed in frequency before multiplying.
#[derive(Debug, Clone, Copy)]
pub enum Placement {
    Identity,
    /// `m(ξ - ν)`.
    Shift(Point),
    /// `m(2^{-ℓ} ξ)` given the factor `2^{-ℓ}`.
    Dilate(f64),
    /// `m(s (ξ - ν))`.
    ScaledShift {
        scale: f64,
        shift: Point,
    },
}

impl Placement {
    pub fn map(&self, xi: &Point) -> Point {
        match *self {
            Placement::Identity => *xi,
            Placement::Shift(nu) => [xi[0] - nu[0], xi[1] - nu[1]],
            Placement::Dilate(s) => [s * xi[0], s * xi[1]],
            Placement::ScaledShift { scale, shift } => {
                [scale * (xi[0] - shift[0]), scale * (xi[1] - shift[1])]
            }
        }
    }
}

/// `m(D) f = F^{-1}[m · F f]`.
pub fn apply_multiplier(
    profile: impl Fn(&Point) -> f64 + Sync,
    placement: Placement,
    f: &Field,
) -> Field {
    let spec = forward_transform(f).multiply(|xi| profile(&placement.map(xi)));
    inverse_transform(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::lp_norm;
    use crate::field::Spectrum;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smooth_step_symmetry() {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!((smooth_step(t) + smooth_step(1.0 - t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sharp_value_one_sets() {
        let p = DyadicPartition::with_max_shell(Flavor::Sharp, 8);
        let g = Grid::new(1, 64.0, 4096).unwrap();
        let (lo, hi) = (2f64.powf(1.75), 2f64.powf(2.25));
        let mut count = 0;
        for xi in g.frequencies() {
            let r = xi[0].abs();
            if r >= lo && r <= hi {
                assert_eq!(p.psi(2, &xi), 1.0);
                count += 1;
            }
            if r <= 2f64.powf(0.25) {
                assert_eq!(p.psi(0, &xi), 1.0);
            }
            if r >= 2f64.powf(2.75) || r <= 2f64.powf(1.25) {
                assert_eq!(p.psi(2, &xi), 0.0);
            }
        }
        assert!(count > 10);
    }

    #[test]
    fn origin_values_and_sum() {
        for flavor in [Flavor::Standard, Flavor::Sharp] {
            let p = DyadicPartition::with_max_shell(flavor, 6);
            assert_eq!(p.psi(0, &[0.0, 0.0]), 1.0);
            for l in 1..=6 {
                assert_eq!(p.psi(l, &[0.0, 0.0]), 0.0);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let g = Grid::new(2, 16.0, 256).unwrap();
            for _ in 0..1000 {
                let idx = rng.gen_range(0..g.len());
                let xi = g.frequency(idx);
                if norm(&xi) <= 64.0 {
                    assert!((p.sum(&xi) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn standard_supports() {
        let p = DyadicPartition::with_max_shell(Flavor::Standard, 6);
        for i in 0..4000 {
            let r = i as f64 * 0.04;
            for l in 1..=6 {
                let lo = 2f64.powi(l as i32 - 1);
                if r <= lo || r >= 4.0 * lo {
                    assert_eq!(p.psi(l, &[r, 0.0]), 0.0);
                }
            }
        }
    }

    #[test]
    fn grid_too_coarse() {
        let g = Grid::new(1, 64.0, 128).unwrap();
        assert!(build_dyadic(Flavor::Sharp, &g).is_err());
        let g = Grid::new(1, 64.0, 4096).unwrap();
        assert_eq!(build_dyadic(Flavor::Sharp, &g).unwrap().max_shell(), 6);
    }

    #[test]
    fn uniform_partition_exact() {
        for n in [1, 2] {
            let u = build_uniform(n).unwrap();
            for i in 0..=200 {
                for j in 0..=(if n == 2 { 20 } else { 0 }) {
                    let xi = [
                        -0.5 + i as f64 / 200.0,
                        if n == 2 { -0.5 + j as f64 / 20.0 } else { 0.0 },
                    ];
                    let mut s = 0.0;
                    for a in -2..=2 {
                        for b in if n == 2 { -2..=2 } else { 0..=0 } {
                            s += u.phi_at([a, b], &xi);
                        }
                    }
                    assert!((s - 1.0).abs() < 1e-14);
                    assert!((u.phi_tilde(&xi) * u.phi(&xi) - u.phi(&xi)).abs() == 0.0);
                }
            }
            for i in 0..100 {
                let t = 1.0 + i as f64 * 0.05;
                assert_eq!(u.phi(&[t, 0.0]), 0.0);
                assert_eq!(u.phi(&[-t, 0.0]), 0.0);
            }
        }
    }

    #[test]
    fn majorants_cover_blocks() {
        let p = DyadicPartition::with_max_shell(Flavor::Standard, 8);
        let m = MajorantFamily;
        for i in 0..20000 {
            let r = i as f64 * 0.02;
            for k in 0..=6 {
                if p.psi(k, &[r, 0.0]) != 0.0 {
                    assert_eq!(m.psi_tilde(k, &[r, 0.0]), 1.0);
                }
                let t = m.psi_tilde(k, &[r, 0.0]);
                if k == 0 && r >= 4.0
                    || k > 0 && (r >= 2f64.powi(k as i32 + 2) || r <= 2f64.powi(k as i32 - 2))
                {
                    assert_eq!(t, 0.0);
                }
            }
        }
    }

    fn bandlimited(grid: Grid, radius: f64, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Spectrum::from_fn(grid, |_| Complex64::new(0.0, 0.0));
        let mut s = s;
        for i in 0..grid.len() {
            if norm(&grid.frequency(i)) <= radius {
                s.coeffs_mut()[i] =
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        inverse_transform(&s)
    }

    #[test]
    fn multiplier_identities() {
        let g = Grid::new(1, 64.0, 4096).unwrap();
        let p = build_dyadic(Flavor::Sharp, &g).unwrap();
        let f = bandlimited(g, 50.0, 3);
        let same = apply_multiplier(|_| 1.0, Placement::Identity, &f);
        assert!(same.rel_max_diff(&f).unwrap() < 1e-12);

        let mut total = Field::zeros(g);
        for l in 0..=p.max_shell() {
            total = total
                .add(&apply_multiplier(
                    |xi| p.psi(l, xi),
                    Placement::Identity,
                    &f,
                ))
                .unwrap();
        }
        assert!(total.rel_max_diff(&f).unwrap() < 1e-10);

        // field supported where ψ_3 = 1
        let mut s = Spectrum::zeros(g);
        for i in 0..g.len() {
            let r = g.frequency(i)[0].abs();
            if r >= 2f64.powf(2.8) && r <= 2f64.powf(3.2) {
                s.coeffs_mut()[i] = Complex64::new((i as f64).sin(), (i as f64).cos());
            }
        }
        let f3 = inverse_transform(&s);
        let b3 = apply_multiplier(|xi| p.psi(3, xi), Placement::Identity, &f3);
        assert!(b3.rel_max_diff(&f3).unwrap() < 1e-12);
        let b1 = apply_multiplier(|xi| p.psi(1, xi), Placement::Identity, &f3);
        assert!(lp_norm(&b1, 2.0).unwrap() < 1e-12 * lp_norm(&f3, 2.0).unwrap());
    }

    #[test]
    fn derivative_decay_is_scale_stable() {
        // finite-difference derivatives of ψ_ℓ scale like 2^{-ℓ|α|}
        let p = DyadicPartition::with_max_shell(Flavor::Standard, 10);
        let step = 1e-3;
        let mut consts = vec![];
        for l in 2..=6 {
            let lo = 2f64.powi(l as i32 - 1);
            let hi = 2f64.powi(l as i32 + 1);
            let (mut d1, mut d2) = (0.0_f64, 0.0_f64);
            let mut r = lo;
            let sc = 2f64.powi(l as i32 - 2);
            let h = step * sc;
            while r <= hi {
                let f = |t: f64| p.psi(l, &[t, 0.0]);
                d1 = d1.max(((f(r + h) - f(r - h)) / (2.0 * h)).abs());
                d2 = d2.max(((f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)).abs());
                r += h;
            }
            consts.push((d1 * 2f64.powi(l as i32), d2 * 4f64.powi(l as i32)));
        }
        for c in &consts {
            assert!(c.0 / consts[0].0 < 1.1 && consts[0].0 / c.0 < 1.1);
            assert!(c.1 / consts[0].1 < 1.1 && consts[0].1 / c.1 < 1.1);
        }
    }
}
