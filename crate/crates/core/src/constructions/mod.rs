//! Explicit symbol and data families with their reference outputs.

mod bump;
mod constants;
mod families;
mod prop13;
mod rademacher;
mod suite;

pub use bump::{bump_tilde, ScaledBump};
pub use constants::{smallest_constants, Constants};
pub use families::{
    even_inverse_1d, family_p_lower, family_p_upper, FamilyInstance, FamilyParam, FamilyTag, Reference, UpperProfiles,
    TAIL_GUARD,
};
pub use prop13::{prop13_bump, prop13_family};
pub use rademacher::{
    bracket, data_weight, dnu, dnu_truncated, lambda_shell, rademacher_family, rademacher_k_max, rademacher_mu_max,
    rademacher_signs, Dnu, IndexSets, DNU_TRUNCATION, RADEMACHER_MU_MAX,
};
pub use suite::mixed_suite;
