//! Explicit builders: split cyclic fields with small discriminant, towers
//! built from them, and small parameter searches.

mod params;
mod split_cyclic;
mod towers;

pub use params::{
    effective_threshold_check, inert_quadratic_witness, shafarevich_local_params, LocalParams, ThresholdReport,
};
pub use split_cyclic::{
    auxiliary_primes, find_split_cyclic, frobenius_rows, functional_character, is_cyclic, prime_power, FrobeniusMatrix,
    FrobeniusRows, SplitCyclicCertificate, SplitCyclicOptions, INLINE_MATRIX_ENTRIES,
};
pub use towers::{
    build_anti_widmer_tower, build_product_tower, next_window, window_terms, LevelConditions, TowerKind, TowerLevel,
    TowerSpec, WindowReport,
};
