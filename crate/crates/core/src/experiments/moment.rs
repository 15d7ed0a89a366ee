use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use super::record::ExperimentRecord;
use super::report::ExperimentReport;
use crate::constructions::{smallest_constants, IndexSets, ScaledBump, DNU_TRUNCATION};
use crate::error::{Error, Result};
use crate::field::{inverse_transform, lp_quasi_norm, Field, Spectrum};
use num_complex::Complex64;

/// Cut-offs `ℓ_max` at which the comparison series is summed.
pub const PARTIAL_SUM_CUTS: [u32; 6] = [8, 16, 32, 64, 128, 256];

/// `Σ_{ℓ=k0}^{ℓ_max} ℓ^{-q(1+ε)}`.
pub fn comparison_partial_sum(q: f64, epsilon: f64, l_max: u32) -> f64 {
    let k0 = smallest_constants(1).k0;
    (k0..=l_max).map(|l| (l as f64).powf(-q * (1.0 + epsilon))).sum()
}

/// Monte-Carlo `q`-th moments of the dyadic blocks `Σ_{ν∈Λ_ℓ} r_ν d_ν e^{iνx} Φ(x)²`
/// against the Khintchine prediction `(Σ d_ν²)^{q/2} ‖Φ²‖_p^q`, and the partial sums
/// of the comparison series.
///
/// Series: `rademacher_moment`, `rademacher_khintchine` (indexed by `ℓ`) and
/// `rademacher_partial_sum` (indexed by `ℓ_max`).
pub fn run_rademacher_moment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    if cfg.experiment != ExperimentKind::Rademacher {
        return Err(Error::Config(format!("config is for `{}`, not `rademacher`", cfg.experiment)));
    }
    let grid = cfg.grid()?;
    let k0 = smallest_constants(1).k0;
    if cfg.range.0 < k0 {
        return Err(Error::Config(format!("shells start at k0 = {k0}")));
    }
    if 2f64.powf(cfg.range.1 as f64 + 0.125) + 1.0 >= grid.nyquist() {
        return Err(Error::Config(format!("shell {} not resolved by the grid", cfg.range.1)));
    }
    let sets = IndexSets::new(cfg.range.1, cfg.epsilon, DNU_TRUNCATION)?;
    let bump = ScaledBump::for_grid(&grid)?;
    let phi = inverse_transform(&Spectrum::from_fn(grid, |xi| Complex64::new(bump.phi(xi), 0.0)));
    let phi2 = phi.mul(&phi)?;
    let xs: Vec<f64> = (0..grid.len()).map(|i| grid.point(i)[0]).collect();

    let shells: Vec<u32> = (cfg.range.0..=cfg.range.1).collect();
    let decay = -cfg.q * (1.0 + cfg.epsilon);
    let mut report = ExperimentReport::default();
    let record = |series: &str, p: f64, index: f64, value: f64, predicted: f64| ExperimentRecord {
        experiment: series.into(),
        family: "rademacher".into(),
        n: 1,
        p,
        q: cfg.q,
        index,
        value,
        predicted_exponent: predicted,
        seed: cfg.seed,
    };
    // waves[ℓ][t] = d_ν e^{iνx} Φ² for ν ∈ Λ_ℓ
    let waves: Vec<Vec<Vec<Complex64>>> = shells
        .iter()
        .map(|&l| {
            sets.shell(l)
                .iter()
                .map(|nu| {
                    let d = sets.dnu[nu];
                    xs.iter()
                        .zip(phi2.samples())
                        .map(|(&x, &w)| Complex64::from_polar(d, *nu as f64 * x) * w)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sums = vec![vec![0.0; cfg.p.len()]; shells.len()];
    let mut block = vec![Complex64::new(0.0, 0.0); grid.len()];
    for _ in 0..cfg.trials {
        for (si, shell_waves) in waves.iter().enumerate() {
            block.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            for w in shell_waves {
                let r = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                for (b, v) in block.iter_mut().zip(w) {
                    *b += v * r;
                }
            }
            let f = Field::new(grid, block.clone())?;
            for (pi, &p) in cfg.p.iter().enumerate() {
                sums[si][pi] += lp_quasi_norm(&f, p)?.powf(cfg.q);
            }
        }
    }
    for (si, &l) in shells.iter().enumerate() {
        let energy = sets.shell_energy(l);
        for (pi, &p) in cfg.p.iter().enumerate() {
            let moment = sums[si][pi] / cfg.trials as f64;
            let predicted = energy.powf(cfg.q / 2.0) * lp_quasi_norm(&phi2, p)?.powf(cfg.q);
            report.records.push(record("rademacher_moment", p, l as f64, moment, decay));
            report.records.push(record("rademacher_khintchine", p, l as f64, predicted, decay));
        }
    }
    let growth = (1.0 + decay).max(0.0);
    for cut in PARTIAL_SUM_CUTS {
        let s = comparison_partial_sum(cfg.q, cfg.epsilon, cut);
        report.records.push(record("rademacher_partial_sum", 0.0, cut as f64, s, growth));
    }
    Ok(report)
}
