use serde::{Deserialize, Serialize};

/// Every resource bound used anywhere in the library. Exceeding one is always
/// an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Caps {
    /// Largest integer the sieve (and any prime search) may reach.
    pub sieve: u64,
    /// Largest character group that may be materialised.
    pub group: u64,
    /// Largest number of subgroups an intermediate-field walk may produce.
    pub lattice: u64,
    /// Largest dimension of a linear system over Z/q.
    pub linear: u64,
    /// Largest number of candidate polynomials in an enumeration box.
    pub enumeration: u64,
    /// Trial-division bound for the smooth part of a factorisation.
    pub factor_trial: u64,
    /// Largest number of interpolation tuples tried by the factor search.
    pub factor_search: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            sieve: 100_000_000,
            group: 1_000_000,
            lattice: 10_000,
            linear: 20_000,
            enumeration: 50_000_000,
            factor_trial: 10_000_000,
            factor_search: 5_000_000,
        }
    }
}
