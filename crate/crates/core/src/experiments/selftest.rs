use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::baseline::{amalgam_wiener_spread, Baseline};
use super::record::{read_records, write_records, ExperimentRecord};
use crate::constructions::{dnu, lambda_shell, mixed_suite, rademacher_family, smallest_constants, Constants};
use crate::error::Result;
use crate::field::{forward_transform, inverse_transform, lp_norm, Field};
use crate::grid::Grid;
use crate::operator::{apply_direct, apply_fast, SymbolClass, SymbolSpec};
use crate::partitions::{build_dyadic, build_uniform, DyadicPartition, Flavor};
use crate::spaces::{amalgam_norm, as_spectrum, besov_norm, default_window, schur_bound, stft, BesovParams};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub checks: Vec<Check>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One `PASS name detail` or `FAIL name detail` line per check.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfTestOptions {
    pub seed: u64,
    /// Negative control: perturb one dyadic shell so that `Σ ψ_ℓ ≠ 1`.
    pub corrupt_partition: bool,
}

impl Default for SelfTestOptions {
    fn default() -> Self {
        Self { seed: 1, corrupt_partition: false }
    }
}

pub const PARTITION_TOL: f64 = 1e-12;
pub const PLANCHEREL_TOL: f64 = 1e-10;
pub const STFT_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-10;

fn check(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match run() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Worst `|Σ ψ_ℓ - 1|` over grid frequencies inside the resolved radius.
pub fn partition_defect(part: &DyadicPartition, grid: &Grid) -> f64 {
    let r = part.resolved_radius();
    grid.frequencies()
        .filter(|xi| crate::grid::norm(xi) <= r)
        .map(|xi| (part.sum(&xi) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Relative Parseval defect `|‖f‖₂² - (2π)^{-n} Σ |f̂|² dξ^n| / ‖f‖₂²`.
pub fn plancherel_defect(f: &Field) -> Result<f64> {
    let g = f.grid();
    let lhs = lp_norm(f, 2.0)?.powi(2);
    let s = forward_transform(f);
    let rhs = s.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() * g.dual_cell();
    Ok((lhs - rhs).abs() / lhs)
}

/// Worst relative defect of `|V_g f(x, ξ)| = 2π |V_ĝ f̂(-ξ, x)|` on a self-dual grid.
pub fn stft_swap_defect(f: &Field) -> Result<f64> {
    let g = f.grid();
    let w = default_window(g);
    let lhs = stft(f, &w)?;
    let rhs = stft(&inverse_transform(&as_spectrum(f)), &inverse_transform(&as_spectrum(&w)))?;
    let m = g.samples();
    let scale = lhs.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for x in 0..m {
        for xi in 0..m {
            let b = 2.0 * PI * rhs.at((m - xi) % m, x).norm();
            worst = worst.max((lhs.at(x, xi).norm() - b).abs() / scale);
        }
    }
    Ok(worst)
}

/// Runs the invariant suites of every module; deterministic for fixed options.
pub fn run_selftest(opts: SelfTestOptions) -> SelfTestReport {
    let mut checks = vec![];
    let seed = opts.seed;

    for flavor in [Flavor::Standard, Flavor::Sharp] {
        let name = if flavor == Flavor::Standard { "partition_sum_standard" } else { "partition_sum_sharp" };
        checks.push(check(name, || {
            let mut worst: f64 = 0.0;
            for g in [Grid::new(1, 64.0, 4096)?, Grid::new(2, 16.0, 128)?] {
                let mut part = build_dyadic(flavor, &g)?;
                if opts.corrupt_partition {
                    part = part.corrupted(2, 1e-3);
                }
                worst = worst.max(partition_defect(&part, &g));
            }
            Ok((worst <= PARTITION_TOL, format!("max|sum-1|={worst:.3e}")))
        }));
    }
    checks.push(check("partition_sum_uniform", || {
        let mut worst: f64 = 0.0;
        for n in [1usize, 2] {
            let u = build_uniform(n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..500 {
                let xi: [f64; 2] = [rng.gen_range(-20.0..20.0), if n == 2 { rng.gen_range(-20.0..20.0) } else { 0.0 }];
                let c = [xi[0].round() as i64, xi[1].round() as i64];
                let mut s = 0.0;
                for a in -2..=2 {
                    for b in if n == 2 { -2..=2 } else { 0..=0 } {
                        s += u.phi_at([c[0] + a, c[1] + b], &xi);
                    }
                }
                worst = worst.max((s - 1.0).abs());
            }
        }
        Ok((worst <= PARTITION_TOL, format!("max|sum-1|={worst:.3e}")))
    }));

    let g1 = Grid::new(1, 32.0, 512).expect("valid grid");
    let suite = |count: usize, s: u64| -> Result<Vec<Field>> { Ok(mixed_suite(&g1, count, s)) };
    checks.push(check("plancherel", || {
        let mut worst: f64 = 0.0;
        for f in suite(20, seed)?.iter().chain(&mixed_suite(&Grid::new(2, 8.0, 64)?, 5, seed)) {
            worst = worst.max(plancherel_defect(f)?);
        }
        Ok((worst <= PLANCHEREL_TOL, format!("max rel={worst:.3e}")))
    }));
    checks.push(check("besov_q_monotone", || {
        // long enough that the widest suite members vanish at the seam
        let g = Grid::new(1, 64.0, 2048)?;
        let part = build_dyadic(Flavor::Standard, &g)?;
        let mut bad = 0;
        for f in mixed_suite(&g, 20, seed) {
            for p in [1.0, 2.0] {
                let vals = [0.5, 1.0, 2.0, f64::INFINITY]
                    .iter()
                    .map(|&q| besov_norm(&f, BesovParams::new(0.0, p, q)?, &part))
                    .collect::<Result<Vec<_>>>()?;
                bad += vals.windows(2).filter(|w| w[1] > w[0] * (1.0 + 1e-12)).count();
            }
        }
        Ok((bad == 0, format!("violations={bad}")))
    }));
    checks.push(check("lebesgue_below_amalgam", || {
        let mut worst: f64 = 0.0;
        for f in suite(50, seed)? {
            let a = amalgam_norm(&f, 2.0, 1.0)?;
            for r in [1.0, 1.5, 2.0] {
                worst = worst.max(lp_norm(&f, r)? / a);
            }
        }
        Ok((worst <= 1.0 + 1e-12, format!("max Lr/amalgam={worst:.6}")))
    }));
    checks.push(check("stft_fourier_swap", || {
        let g = Grid::self_dual(1, 64)?;
        let mut worst: f64 = 0.0;
        for f in mixed_suite(&g, 3, seed) {
            worst = worst.max(stft_swap_defect(&f)?);
        }
        Ok((worst <= STFT_TOL, format!("max rel={worst:.3e}")))
    }));
    checks.push(check("amalgam_wiener_spread", || {
        let b = Baseline::frozen()?;
        let s = amalgam_wiener_spread()?;
        Ok((s <= b.amalgam_wiener_spread, format!("spread={s:.4} bound={:.4}", b.amalgam_wiener_spread)))
    }));
    checks.push(check("schur_bound", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = 0;
        for _ in 0..1000 {
            let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..12));
            let a: Vec<Vec<f64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
            let b: Vec<f64> = (0..r).map(|_| rng.gen_range(0.0..1.0)).collect();
            let cc: Vec<f64> = (0..c).map(|_| rng.gen_range(0.0..1.0)).collect();
            if !schur_bound(&a, &b, &cc)?.holds() {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("violations={bad}/1000")))
    }));
    checks.push(check("operator_fast_matches_direct", || {
        let g = Grid::new(1, 2.0 * PI * 4.0, 64)?;
        let sigma = SymbolSpec::multiplier("check", SymbolClass::Joint(-0.5), |a, b| {
            Complex64::new((1.0 + a[0] * a[0] + b[0] * b[0]).powf(-0.25), 0.1 * (a[0] - b[0]).sin())
        });
        let mut worst: f64 = 0.0;
        let fs = mixed_suite(&g, 6, seed);
        for pair in fs.chunks(2) {
            let fast = apply_fast(&sigma, &pair[0], &pair[1])?;
            let direct = apply_direct(&sigma, &pair[0], &pair[1])?;
            worst = worst.max(fast.rel_max_diff(&direct)?);
        }
        Ok((worst <= ORACLE_TOL, format!("max rel={worst:.3e}")))
    }));
    checks.push(check("constants", || {
        let c1 = smallest_constants(1);
        let c2 = smallest_constants(2);
        let ok = c1 == Constants { j0: 4, k0: 3, n0: 1 } && c2 == Constants { j0: 4, k0: 4, n0: 2 };
        Ok((ok, format!("n=1 {c1:?} n=2 {c2:?}")))
    }));
    checks.push(check("lambda_growth_and_dnu_positive", || {
        let k0 = smallest_constants(1).k0;
        let mut ok = true;
        for k in k0..12 {
            let r = lambda_shell(k + 1).len() as f64 / lambda_shell(k).len() as f64;
            ok &= (1.0..=4.0).contains(&r);
            for nu in lambda_shell(k).into_iter().step_by(7) {
                ok &= dnu(nu, 0.1, 4096)?.value() > 0.0;
            }
        }
        Ok((ok, String::new()))
    }));
    checks.push(check("deterministic_generators", || {
        let g = Grid::new(1, 2.0 * PI * 8.0, 1024)?;
        let a = rademacher_family(seed, 0.1, &g)?;
        let b = rademacher_family(seed, 0.1, &g)?;
        let same_suite = mixed_suite(&g, 4, seed) == mixed_suite(&g, 4, seed);
        Ok((a.fields[0] == b.fields[0] && same_suite, String::new()))
    }));
    checks.push(check("csv_round_trip", || {
        let recs: Vec<ExperimentRecord> = (0..5)
            .map(|i| ExperimentRecord {
                experiment: "selftest".into(),
                family: "none".into(),
                n: 1,
                p: 1.0 / 3.0,
                q: 2.0,
                index: i as f64,
                value: (i as f64 + 0.1).ln(),
                predicted_exponent: -0.5,
                seed,
            })
            .collect();
        let mut buf = vec![];
        write_records(&recs, &mut buf)?;
        Ok((read_records(&buf[..])? == recs, String::new()))
    }));
    SelfTestReport { checks }
}
