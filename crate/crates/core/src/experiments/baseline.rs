use serde::{Deserialize, Serialize};

use super::bounded::random_trials;
use crate::constructions::{dnu, lambda_shell, mixed_suite, DNU_TRUNCATION};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spaces::amalgam_wiener_equivalence_report;

const FROZEN: &str = include_str!("../../baseline.toml");

/// Seed of every calibration measurement.
pub const CALIBRATION_SEED: u64 = 9;
/// `ε` of the `d_ν` lower bound.
pub const DNU_EPSILON: f64 = 0.1;
/// Shells of the `d_ν` lower bound.
pub const DNU_SHELLS: std::ops::RangeInclusive<u32> = 4..=8;

/// Regression thresholds measured once by `bilinlab calibrate` and checked in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    /// Factor between a measured value and its threshold.
    pub margin: f64,
    /// Upper bound for the random boundedness ratios, `p ∈ {1, 2}`, 50 trials.
    pub bounded_random_max: f64,
    /// Upper bound for the `(L², ℓ¹) / W_{1,2}` spread on the 50-field suite.
    pub amalgam_wiener_spread: f64,
    /// Lower constant `c` in `d_ν ≥ c 2^{-ℓ/2} ℓ^{-(1+ε)}`.
    pub dnu_lower_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured {
    pub bounded_random_max: f64,
    pub amalgam_wiener_spread: f64,
    pub dnu_min_ratio: f64,
}

impl Baseline {
    pub fn frozen() -> Result<Self> {
        Self::parse(FROZEN)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("baseline: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        let body = toml::to_string(self).map_err(|e| Error::Config(format!("baseline: {e}")))?;
        Ok(format!("# Written by `bilinlab calibrate`; thresholds are measured values times `margin`.\n{body}"))
    }

    pub fn from_measured(m: &Measured, margin: f64) -> Self {
        Self {
            margin,
            bounded_random_max: m.bounded_random_max * margin,
            amalgam_wiener_spread: m.amalgam_wiener_spread * margin,
            dnu_lower_c: m.dnu_min_ratio / margin,
        }
    }
}

/// `d_ν / (2^{-ℓ/2} ℓ^{-(1+ε)})` for `ν ∈ Λ_ℓ`, as `(ℓ, ν, ratio)`.
pub fn dnu_ratios(epsilon: f64, shells: std::ops::RangeInclusive<u32>) -> Result<Vec<(u32, i64, f64)>> {
    let mut out = vec![];
    for l in shells {
        let scale = 2f64.powf(-(l as f64) / 2.0) * (l as f64).powf(-(1.0 + epsilon));
        for nu in lambda_shell(l) {
            out.push((l, nu, dnu(nu, epsilon, DNU_TRUNCATION)?.value() / scale));
        }
    }
    Ok(out)
}

/// `max / min` of `(L², ℓ¹) / W_{1,2}` on the fixed 50-field suite.
pub fn amalgam_wiener_spread() -> Result<f64> {
    let g = Grid::new(1, 32.0, 256)?;
    Ok(amalgam_wiener_equivalence_report(&mixed_suite(&g, 50, CALIBRATION_SEED))?.spread())
}

pub fn measure() -> Result<Measured> {
    let bounded = random_trials(CALIBRATION_SEED, 50, &[1.0, 2.0])?.into_iter().map(|t| t.2).fold(0.0, f64::max);
    let dnu_min = dnu_ratios(DNU_EPSILON, DNU_SHELLS)?.into_iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    Ok(Measured { bounded_random_max: bounded, amalgam_wiener_spread: amalgam_wiener_spread()?, dnu_min_ratio: dnu_min })
}

pub fn calibrate(margin: f64) -> Result<Baseline> {
    if !(margin >= 1.0) {
        return Err(Error::Config(format!("margin {margin} must be at least 1")));
    }
    Ok(Baseline::from_measured(&measure()?, margin))
}
