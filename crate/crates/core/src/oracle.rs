//! Classical integer-arithmetic oracles: sieve of Eratosthenes, trial
//! division, and factorization.
//!
//! These are the ground truth that every trigonometric formula in this crate
//! is verified against. They deliberately share no code with the indicator
//! machinery and use no floating point at all — independence is what makes
//! them oracles.

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};

/// Ordered table of all primes up to a limit.
///
/// Invariant: `primes` is strictly increasing and contains exactly the primes
/// in `[2, limit]`. Tables come from [`sieve`] or are grown incrementally by
/// the bootstrap mode of `pi_v2` (which replaces the sieve with the
/// characteristic function itself, one candidate at a time).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeTable {
    pub(crate) limit: u64,
    pub(crate) primes: Vec<u64>,
}

impl PrimeTable {
    /// A table that covers nothing beyond 1 and lists no primes. This is the
    /// seed for bootstrap growth.
    pub fn empty() -> Self {
        PrimeTable {
            limit: 1,
            primes: Vec::new(),
        }
    }

    /// Inclusive bound up to which this table is complete.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes in `[2, limit]`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Whether the table is complete at least up to `bound`.
    pub fn covers(&self, bound: u64) -> bool {
        self.limit >= bound
    }

    /// The primes `<= bound`, as a prefix slice. `bound` must be covered.
    pub fn primes_up_to(&self, bound: u64) -> &[u64] {
        debug_assert!(self.covers(bound));
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    /// Membership test for covered `n`.
    pub fn contains(&self, n: u64) -> bool {
        debug_assert!(self.covers(n));
        self.primes.binary_search(&n).is_ok()
    }
}

/// Sieve of Eratosthenes: all primes up to `limit` (inclusive).
///
/// Uses a bit-packed composite map, so memory is `limit / 8` bytes.
pub fn sieve(limit: u64, caps: &Caps) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::InvalidInput(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    if limit > caps.sieve_limit {
        return Err(Error::CapExceeded {
            what: "sieve",
            requested: limit,
            cap: caps.sieve_limit,
        });
    }

    let n = limit as usize;
    let mut composite = vec![0u64; n / 64 + 1];
    let is_set = |bits: &[u64], i: usize| bits[i >> 6] >> (i & 63) & 1 == 1;

    let mut p = 2usize;
    while p * p <= n {
        if !is_set(&composite, p) {
            let mut mult = p * p;
            while mult <= n {
                composite[mult >> 6] |= 1 << (mult & 63);
                mult += p;
            }
        }
        p += 1;
    }

    let primes = (2..=n)
        .filter(|&i| !is_set(&composite, i))
        .map(|i| i as u64)
        .collect();
    Ok(PrimeTable { limit, primes })
}

/// Trial-division primality: true iff no integer in `[2, sqrt(n)]` divides `n`.
///
/// Total over all `u64`; values below 2 are not prime.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization of `n` with exponents, `(p_k, alpha_k)` ascending in `p_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub(crate) n: u64,
    pub(crate) factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors (the classical omega).
    pub fn distinct_count(&self) -> usize {
        self.factors.len()
    }

    /// Recompute `prod p_k^alpha_k`; equals `n` by construction.
    pub fn reconstruct(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, a)| acc * p.pow(a))
    }
}

/// Factorize `n >= 2` by trial division with early termination at `sqrt(n)`.
pub fn factorize(n: u64, caps: &Caps) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "factorization requires n >= 2, got {n}"
        )));
    }
    if n > caps.factorize_limit {
        return Err(Error::CapExceeded {
            what: "factorize",
            requested: n,
            cap: caps.factorize_limit,
        });
    }

    let mut factors = Vec::new();
    let mut rem = n;
    let mut d = 2u64;
    while d <= rem / d {
        if rem.is_multiple_of(d) {
            let mut a = 0u32;
            while rem.is_multiple_of(d) {
                rem /= d;
                a += 1;
            }
            factors.push((d, a));
        }
        d += 1;
    }
    if rem > 1 {
        factors.push((rem, 1));
    }
    Ok(Factorization { n, factors })
}
