//! Scaling-law experiments, records and the self-test.

mod baseline;
mod bounded;
mod config;
mod fit;
mod growth;
mod moment;
mod record;
mod report;
mod selftest;

pub use baseline::{
    amalgam_wiener_spread, calibrate, dnu_ratios, measure, Baseline, Measured, CALIBRATION_SEED, DNU_EPSILON,
    DNU_SHELLS,
};
pub use bounded::{
    bounded_ratios, check_split_class, max_random_ratio, random_symbol, random_trials, random_unit_field,
    run_boundedness, trial_grid, SEMINORM_ORDER,
};
pub use config::{ExperimentConfig, ExperimentKind};
pub use fit::{fit_slope, SlopeFit};
pub use growth::{predicted_growth, run_growth, run_prop13};
pub use moment::{comparison_partial_sum, run_rademacher_moment, PARTIAL_SUM_CUTS};
pub use record::{read_records, write_records, ExperimentRecord, SCHEMA_VERSION};
pub use report::{ExperimentReport, SeriesFit};
pub use selftest::{
    partition_defect, plancherel_defect, run_selftest, stft_swap_defect, Check, SelfTestOptions, SelfTestReport,
    ORACLE_TOL, PARTITION_TOL, PLANCHEREL_TOL, STFT_TOL,
};

/// Runs the experiment named in `cfg`.
pub fn run(cfg: &ExperimentConfig) -> crate::Result<ExperimentReport> {
    match cfg.experiment {
        ExperimentKind::Growth => run_growth(cfg),
        ExperimentKind::Prop13 => run_prop13(cfg),
        ExperimentKind::Bounded => run_boundedness(cfg),
        ExperimentKind::Rademacher => run_rademacher_moment(cfg),
    }
}
