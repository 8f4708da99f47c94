//! Enumeration caps shared by every exhaustive routine.
//!
//! Exceeding a cap is always an error carrying the count that would have been
//! needed; nothing in this crate samples or truncates silently.

use thiserror::Error;

/// Caps applied before any enumeration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of points a single point enumeration may produce.
    pub max_points: u64,
    /// Largest number of blocks a construction may materialize.
    pub max_blocks: u64,
    /// Largest number of transversal t-subsets the verifier may count.
    pub max_subsets: u64,
    /// Largest number of group elements or complements a brute-force path may visit.
    pub max_group_elements: u64,
    /// Largest matrix side length.
    pub max_matrix_side: usize,
    /// Largest number of block-pair incidence steps a fingerprint may take.
    pub max_pair_operations: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_points: 1_000_000,
            max_blocks: 1_000_000,
            max_subsets: 10_000_000,
            max_group_elements: 1_000_000,
            max_matrix_side: 4096,
            max_pair_operations: 2_000_000_000,
        }
    }
}

/// A configured cap was exceeded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("guard exceeded: {what} requires {required}, limit is {limit}")]
pub struct GuardExceeded {
    pub what: &'static str,
    pub required: u128,
    pub limit: u128,
}

impl GuardExceeded {
    pub fn check(what: &'static str, required: u128, limit: u64) -> Result<(), GuardExceeded> {
        if required > u128::from(limit) {
            Err(GuardExceeded { what, required, limit: u128::from(limit) })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` in u128, or `None` on overflow.
pub fn checked_pow(base: u64, exp: u64) -> Option<u128> {
    let exp = u32::try_from(exp).ok()?;
    u128::from(base).checked_pow(exp)
}
