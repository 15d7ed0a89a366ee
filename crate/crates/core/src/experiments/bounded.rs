use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use super::fit::fit_slope;
use super::growth::predicted_growth;
use super::record::ExperimentRecord;
use super::report::{ExperimentReport, SeriesFit};
use crate::constructions::{family_p_upper, FamilyTag};
use crate::error::{Error, Result};
use crate::field::{inverse_transform, lp_norm, Field, Spectrum};
use crate::grid::Grid;
use crate::operator::{apply_fast, seminorm_estimate, RankTerm, SampleWindow, SymbolClass, SymbolSpec, XFactor};
use crate::partitions::{build_dyadic, cutoff, DyadicPartition, Flavor};
use crate::spaces::{besov_norm, BesovParams};
use num_complex::Complex64;

/// Derivative order of the seminorm used for normalization.
pub const SEMINORM_ORDER: usize = 2;

/// Grid of the random trials: integer frequencies are on the lattice, and outputs of
/// the generated data stay inside the resolved dyadic radius.
pub fn trial_grid() -> Grid {
    Grid::new(1, 2.0 * PI * 8.0, 1024).expect("valid grid")
}

/// Rejects split classes outside `m1, m2 < 0`, `m1 + m2 = -n/2`.
pub fn check_split_class(class: SymbolClass, n: usize) -> Result<(f64, f64)> {
    match class {
        SymbolClass::Split(m1, m2) if m1 < 0.0 && m2 < 0.0 && (m1 + m2 + n as f64 / 2.0).abs() < 1e-12 => {
            Ok((m1, m2))
        }
        other => Err(Error::InvalidExponent(format!("class {other:?} violates m1, m2 < 0, m1 + m2 = -n/2"))),
    }
}

/// Rank-one symbol `a(x) b(ξ1) c(ξ2)` of class `Split(m1, -1/2 - m1)`, not normalized.
pub fn random_symbol(rng: &mut impl Rng) -> SymbolSpec {
    let m1 = rng.gen_range(-0.45..-0.05);
    let m2 = -0.5 - m1;
    let modes: Vec<(f64, f64, f64)> =
        (1..=3).map(|k| (k as f64, rng.gen_range(0.0..0.3), rng.gen_range(0.0..2.0 * PI))).collect();
    let a = XFactor::func(move |x| {
        let v: f64 = 1.0 + modes.iter().map(|&(k, c, t)| c * (k * x[0] + t).cos()).sum::<f64>();
        Complex64::new(v, 0.0)
    });
    let (w1, t1, e1) = (rng.gen_range(0.2..1.5), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..0.5));
    let (w2, t2, e2) = (rng.gen_range(0.2..1.5), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..0.5));
    let b = move |xi: &[f64; 2]| {
        Complex64::new((1.0 + xi[0] * xi[0]).powf(m1 / 2.0), 0.0) * (1.0 + e1 * (w1 * xi[0] + t1).sin())
    };
    let c = move |xi: &[f64; 2]| {
        Complex64::new((1.0 + xi[0] * xi[0]).powf(m2 / 2.0), 0.0) * Complex64::from_polar(1.0, e2 * (w2 * xi[0] + t2).sin())
    };
    SymbolSpec::tensor("random_rank1", SymbolClass::Split(m1, m2), vec![RankTerm::new(a, b, c)])
}

/// Unit-`L²` sum of three band-limited packets with `|ξ| ≤ 10`.
pub fn random_unit_field(grid: &Grid, rng: &mut impl Rng) -> Result<Field> {
    let packets: Vec<(f64, f64, f64, Complex64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(-8.0..8.0),
                rng.gen_range(0.5..2.0),
                rng.gen_range(-6.0..6.0),
                Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI)),
            )
        })
        .collect();
    let f = inverse_transform(&Spectrum::from_fn(*grid, |xi| {
        packets
            .iter()
            .map(|&(c, w, x0, amp)| amp * cutoff((xi[0] - c).abs(), 0.0, w) * Complex64::from_polar(1.0, -x0 * xi[0]))
            .sum()
    }));
    let norm = lp_norm(&f, 2.0)?;
    Ok(f.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// `‖T_σ(f1, f2)‖_{B^0_{p,1}} / (‖f1‖₂ ‖f2‖₂)` for each `p`.
pub fn bounded_ratios(
    sigma: &SymbolSpec,
    f1: &Field,
    f2: &Field,
    ps: &[f64],
    part: &DyadicPartition,
) -> Result<Vec<f64>> {
    let out = apply_fast(sigma, f1, f2)?;
    let denom = lp_norm(f1, 2.0)? * lp_norm(f2, 2.0)?;
    ps.iter().map(|&p| Ok(besov_norm(&out, BesovParams::new(0.0, p, 1.0)?, part)? / denom)).collect()
}

/// Seminorm-normalized ratios along the `p_upper` family (`bounded_family`) and over
/// random rank-one symbols with unit seminorm (`bounded_random`).
pub fn run_boundedness(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    if cfg.experiment != ExperimentKind::Bounded {
        return Err(Error::Config(format!("config is for `{}`, not `bounded`", cfg.experiment)));
    }
    let mut report = ExperimentReport::default();
    let record = |series: &str, family: &str, p: f64, index: f64, value: f64, predicted: f64| ExperimentRecord {
        experiment: series.into(),
        family: family.into(),
        n: cfg.n,
        p,
        q: 1.0,
        index,
        value,
        predicted_exponent: predicted,
        seed: cfg.seed,
    };

    let grid = cfg.grid()?;
    let part = build_dyadic(cfg.flavor, &grid)?;
    let mut scale = None;
    for j in cfg.range.0..=cfg.range.1 {
        let inst = family_p_upper(j, &grid)?;
        let sigma = inst.symbol.as_ref().expect("operator family");
        // the symbol does not depend on j
        let s = match scale {
            Some(s) => s,
            None => {
                let s = seminorm_estimate(sigma, SEMINORM_ORDER, &SampleWindow::for_grid(&grid, 16.0))?;
                scale = Some(s);
                s
            }
        };
        let ratios = bounded_ratios(sigma, &inst.fields[0], &inst.fields[1], &cfg.p, &part)?;
        for (&p, r) in cfg.p.iter().zip(ratios) {
            let predicted = predicted_growth(FamilyTag::PUpper, cfg.n, p)?;
            report.records.push(record("bounded_family", "p_upper", p, j as f64, r / s, predicted));
        }
    }
    for &p in &cfg.p {
        let fit = fit_slope(&report.series("bounded_family", p))?;
        report.fits.push(SeriesFit {
            series: "bounded_family".into(),
            p,
            slope: fit.slope,
            r2: fit.r2,
            predicted: predicted_growth(FamilyTag::PUpper, cfg.n, p)?,
        });
    }

    for (t, p, r) in random_trials(cfg.seed, cfg.trials, &cfg.p)? {
        report.records.push(record("bounded_random", "random_rank1", p, t as f64, r, 0.0));
    }
    Ok(report)
}

/// `(trial, p, ratio)` for random rank-one symbols normalized to unit seminorm and
/// random unit-`L²` data on [`trial_grid`].
pub fn random_trials(seed: u64, trials: usize, ps: &[f64]) -> Result<Vec<(usize, f64, f64)>> {
    let tg = trial_grid();
    let tpart = build_dyadic(Flavor::Sharp, &tg)?;
    let win = SampleWindow::for_grid(&tg, tg.nyquist() / 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    for t in 0..trials {
        let raw = random_symbol(&mut rng);
        check_split_class(raw.class, 1)?;
        let s = seminorm_estimate(&raw, SEMINORM_ORDER, &win)?;
        let f1 = random_unit_field(&tg, &mut rng)?;
        let f2 = random_unit_field(&tg, &mut rng)?;
        let ratios = bounded_ratios(&raw, &f1, &f2, ps, &tpart)?;
        out.extend(ps.iter().zip(ratios).map(|(&p, r)| (t, p, r / s)));
    }
    Ok(out)
}

/// Largest `bounded_random` ratio in a report.
pub fn max_random_ratio(report: &ExperimentReport) -> f64 {
    report.records.iter().filter(|r| r.experiment == "bounded_random").map(|r| r.value).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_symbol_gives_zero_ratio() {
        let g = trial_grid();
        let part = build_dyadic(Flavor::Sharp, &g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_unit_field(&g, &mut rng).unwrap();
        let zero = SymbolSpec::real_multiplier("zero", SymbolClass::Split(-0.25, -0.25), |_, _| 0.0);
        assert_eq!(bounded_ratios(&zero, &f, &f, &[1.0, 2.0], &part).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn class_constraint() {
        assert!(check_split_class(SymbolClass::Split(-0.25, -0.25), 1).is_ok());
        assert!(check_split_class(SymbolClass::Split(0.0, -0.5), 1).is_err());
        assert!(check_split_class(SymbolClass::Split(-0.2, -0.2), 1).is_err());
        assert!(check_split_class(SymbolClass::Joint(-0.5), 1).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(check_split_class(random_symbol(&mut rng).class, 1).is_ok());
        }
    }
}
