use serde::{Deserialize, Serialize};

/// Resource caps shared by every cap-guarded constructor and sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Limits {
    /// Largest carrier a table algebra may have.
    pub table_cap: usize,
    /// Largest base poset of an upset algebra.
    pub poset_cap: usize,
    /// Largest carrier for which the congruence lattice is enumerated.
    pub oracle_cap: usize,
    /// Maximal number of valuations a sweep may visit.
    pub budget: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            table_cap: 4096,
            poset_cap: 1024,
            oracle_cap: 12,
            budget: 10_000_000,
        }
    }
}
