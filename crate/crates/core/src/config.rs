//! Runtime caps for the expensive operations.
//!
//! The trigonometric formulas implemented here are asymptotically far
//! costlier than the classical algorithms they are checked against, so every
//! expensive entry point is bounded by an explicit, caller-adjustable cap
//! rather than an implicit hang. Exceeding a cap is a distinct error so
//! callers (and the CLI, via exit code 3) can tell "refused by budget" apart
//! from "bad argument".

/// Caps bounding the expensive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest modulus `m` for which a per-modulus denominator table may be
    /// built. Every strategy precomputes O(m) denominators, so this bounds
    /// memory per modulus. Default `10^6`.
    pub max_table_modulus: u64,
    /// Largest `x` accepted by `pi_v1` / `pi_v2`. The summation cost grows
    /// roughly quadratically in `x`. Default `10^5`.
    pub pi_limit: u64,
    /// Largest `n` accepted by `omega_formula`, whose cost is the sum of
    /// `p - 1` over all primes `p <= n`. Default `10^4`.
    pub omega_limit: u64,
    /// Largest limit accepted by the sieve oracle. Default `10^8`.
    pub sieve_limit: u64,
    /// Largest `n` accepted by the trial-division factorization oracle.
    /// Default `2^50`.
    pub factorize_limit: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_table_modulus: 1_000_000,
            pi_limit: 100_000,
            omega_limit: 10_000,
            sieve_limit: 100_000_000,
            factorize_limit: 1 << 50,
        }
    }
}
