use super::config::{ExperimentConfig, ExperimentKind};
use super::fit::fit_slope;
use super::record::ExperimentRecord;
use super::report::{ExperimentReport, SeriesFit};
use crate::constructions::{family_p_lower, family_p_upper, prop13_family, smallest_constants, FamilyTag};
use crate::error::{Error, Result};
use crate::operator::apply_fast;
use crate::partitions::build_dyadic;
use crate::spaces::{amalgam_norm, besov_norm, BesovParams};

/// Exponent of `2^j` in `‖T_σ(f_{1,j}, f_{2,j})‖_{B^0_{p,q}}`.
pub fn predicted_growth(family: FamilyTag, n: usize, p: f64) -> Result<f64> {
    let n = n as f64;
    match family {
        FamilyTag::PLower => Ok(n * (1.0 / p - 1.0)),
        FamilyTag::PUpper => Ok(n * (0.5 - 1.0 / p)),
        other => Err(Error::Config(format!("no growth law for family {other}"))),
    }
}

fn expect(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    cfg.validate()?;
    if cfg.experiment != kind {
        return Err(Error::Config(format!("config is for `{}`, not `{}`", cfg.experiment, kind)));
    }
    Ok(())
}

/// Besov norms of the operator output along one of the two necessity families.
pub fn run_growth(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentKind::Growth)?;
    let family = cfg.family.expect("validated");
    let grid = cfg.grid()?;
    let part = build_dyadic(cfg.flavor, &grid)?;
    let mut report = ExperimentReport::default();
    for j in cfg.range.0..=cfg.range.1 {
        let inst = match family {
            FamilyTag::PLower => family_p_lower(j, &grid)?,
            _ => family_p_upper(j, &grid)?,
        };
        let sigma = inst.symbol.as_ref().expect("operator family");
        let out = apply_fast(sigma, &inst.fields[0], &inst.fields[1])?;
        for &p in &cfg.p {
            let value = besov_norm(&out, BesovParams::new(0.0, p, cfg.q)?, &part)?;
            report.records.push(ExperimentRecord {
                experiment: "growth".into(),
                family: family.name().into(),
                n: cfg.n,
                p,
                q: cfg.q,
                index: j as f64,
                value,
                predicted_exponent: predicted_growth(family, cfg.n, p)?,
                seed: cfg.seed,
            });
        }
    }
    for &p in &cfg.p {
        let fit = fit_slope(&report.series("growth", p))?;
        report.fits.push(SeriesFit {
            series: "growth".into(),
            p,
            slope: fit.slope,
            r2: fit.r2,
            predicted: predicted_growth(family, cfg.n, p)?,
        });
    }
    Ok(report)
}

/// Besov and amalgam norms of `f_N`; slopes are fitted against `log2(N - N0 + 1)`.
pub fn run_prop13(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect(cfg, ExperimentKind::Prop13)?;
    let grid = cfg.grid()?;
    let part = build_dyadic(cfg.flavor, &grid)?;
    let n0 = smallest_constants(cfg.n).n0;
    let mut report = ExperimentReport::default();
    let record = |series: &str, p: f64, q: f64, big_n: u32, value: f64, predicted: f64| ExperimentRecord {
        experiment: series.into(),
        family: FamilyTag::Prop13.name().into(),
        n: cfg.n,
        p,
        q,
        index: big_n as f64,
        value,
        predicted_exponent: predicted,
        seed: cfg.seed,
    };
    for big_n in cfg.range.0..=cfg.range.1 {
        let f = prop13_family(big_n, &grid)?.fields.remove(0);
        let amalgam = amalgam_norm(&f, 2.0, 1.0)?;
        report.records.push(record("prop13_amalgam", 2.0, 1.0, big_n, amalgam, 0.5));
        for &p in &cfg.p {
            let besov = besov_norm(&f, BesovParams::new(0.0, p, 1.0)?, &part)?;
            report.records.push(record("prop13_besov", p, 1.0, big_n, besov, 1.0));
            report.records.push(record("prop13_ratio", p, 1.0, big_n, besov / amalgam, 0.5));
        }
    }
    let log_axis = |pts: Vec<(f64, f64)>| -> Vec<(f64, f64)> {
        pts.into_iter().map(|(k, v)| ((k - n0 as f64 + 1.0).log2(), v)).collect()
    };
    let push = |series: &str, p: f64, predicted: f64, report: &mut ExperimentReport| -> Result<()> {
        let fit = fit_slope(&log_axis(report.series(series, p)))?;
        report.fits.push(SeriesFit { series: series.into(), p, slope: fit.slope, r2: fit.r2, predicted });
        Ok(())
    };
    push("prop13_amalgam", 2.0, 0.5, &mut report)?;
    for &p in &cfg.p {
        push("prop13_besov", p, 1.0, &mut report)?;
        push("prop13_ratio", p, 0.5, &mut report)?;
    }
    Ok(report)
}
