//! Bilinear operators `T_σ`, symbol seminorms, the symbol decomposition and
//! the estimates built on them.

mod apply;
mod decompose;
mod lemmas;
mod peak;
mod seminorm;
mod symbol;

pub use apply::{apply_direct, apply_fast, DIRECT_MAX_1D, DIRECT_MAX_2D, FLUSH};
pub use decompose::{decompose, nu_window, nu_window_for_shell, DecomposedSymbol};
pub use lemmas::{
    lemma31_check, pointwise_piece_ratio, piece_sup, spectral_mass_outside, support_check, trilinear_form,
    trilinear_rows, TrilinearRow,
};
pub use peak::{peak_operator, peak_operator_direct};
pub use seminorm::{seminorm_estimate, SampleWindow};
pub use symbol::{FreqFn, PairFn, RankTerm, SymbolClass, SymbolKind, SymbolSpec, XFactor};
