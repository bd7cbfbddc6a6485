//! The headline formulas built from the indicator: the characteristic
//! function of the primes (two forms), the prime-counting sums, and the
//! distinct-prime-factor count.
//!
//! ```text
//! χ(n)  = ∏_{m ∈ [2, √n]} E_m(n)            (over all integers m)
//!       = ∏_{p ≤ √n, p prime} E_p(n)        (over primes only)
//! π(x)  = Σ_{n=2}^{x} χ(n)                  (v1: integer form; v2: prime form)
//! ω(n)  = Σ_{p ≤ n, p prime} (1 − E_p(n))
//! ```
//!
//! For n ∈ {2, 3} the interval [2, √n] is empty and the empty product is 1,
//! so χ(2) = χ(3) = 1 with zero terms.
//!
//! The √n boundary is always computed with exact integer arithmetic
//! (`u64::isqrt`, i.e. the largest m with m·m ≤ n) — never a floating-point
//! square root, which can misplace the decisive boundary term E_√n(n) for
//! perfect squares.

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::indicator::EvalPool;
use crate::oracle::{sieve, PrimeTable};
use crate::strategy::EvalStrategy;

/// Which product form computed a chi value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChiForm {
    #[serde(rename = "integers")]
    AllIntegers,
    #[serde(rename = "primes")]
    PrimesOnly,
}

impl std::fmt::Display for ChiForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChiForm::AllIntegers => "integers",
            ChiForm::PrimesOnly => "primes",
        })
    }
}

/// Which counting expression computed a pi value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PiForm {
    #[serde(rename = "v1")]
    V1,
    #[serde(rename = "v2")]
    V2,
}

impl std::fmt::Display for PiForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PiForm::V1 => "v1",
            PiForm::V2 => "v2",
        })
    }
}

/// Result of evaluating the characteristic function at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChiResult {
    pub n: u64,
    /// 1 if the formula classifies `n` prime, 0 if composite.
    pub chi: u8,
    pub form: ChiForm,
    pub strategy: EvalStrategy,
    /// Number of `E_m` terms the product formally ranges over — the count of
    /// integers (resp. primes) in `[2, √n]`. Evaluation may stop early at the
    /// first zero term (the product is order-independent), but the count
    /// always reflects the formula, so it is 0 exactly for n ∈ {2, 3}.
    pub terms_evaluated: u64,
}

/// Result of a prime-counting sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PiResult {
    pub x: u64,
    pub count: u64,
    pub form: PiForm,
}

/// Result of the distinct-prime-factor formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaResult {
    pub n: u64,
    pub omega: u64,
    /// The primes `p ≤ n` whose product term equaled 1, i.e. with
    /// `E_p(n) = 0`; these are exactly the prime divisors of `n`.
    pub contributing_primes: Vec<u64>,
}

/// Prime source for `pi_v2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSource {
    /// Take primes up to `√x` from the sieve oracle (default: predictable cost).
    Oracle,
    /// Grow the prime table from the characteristic function itself — no
    /// oracle involvement anywhere on this path, demonstrating that the
    /// formula counts primes without knowing any of them beforehand.
    Bootstrap,
}

fn check_n_at_least_2(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "the formulas are defined for n >= 2, got {n}"
        )));
    }
    Ok(())
}

/// χ over all integers `m ∈ [2, √n]`.
pub fn chi_all_integers(n: u64, strategy: EvalStrategy, caps: &Caps) -> Result<ChiResult> {
    let mut pool = EvalPool::new(strategy, caps);
    chi_all_integers_pooled(n, &mut pool)
}

/// Pooled variant of [`chi_all_integers`] for bulk drivers.
pub fn chi_all_integers_pooled(n: u64, pool: &mut EvalPool) -> Result<ChiResult> {
    check_n_at_least_2(n)?;
    let root = n.isqrt();
    let terms = root.saturating_sub(1);
    let mut chi = 1u8;
    for m in 2..=root {
        if pool.eval(n, m)?.e_value == 0 {
            chi = 0;
            break;
        }
    }
    Ok(ChiResult {
        n,
        chi,
        form: ChiForm::AllIntegers,
        strategy: pool.strategy(),
        terms_evaluated: terms,
    })
}

/// χ over the primes `p ≤ √n` listed in `primes`.
pub fn chi_primes_only(
    n: u64,
    strategy: EvalStrategy,
    primes: &PrimeTable,
    caps: &Caps,
) -> Result<ChiResult> {
    let mut pool = EvalPool::new(strategy, caps);
    chi_primes_only_pooled(n, primes, &mut pool)
}

/// Pooled variant of [`chi_primes_only`] for bulk drivers.
pub fn chi_primes_only_pooled(
    n: u64,
    primes: &PrimeTable,
    pool: &mut EvalPool,
) -> Result<ChiResult> {
    check_n_at_least_2(n)?;
    let root = n.isqrt();
    if !primes.covers(root) {
        return Err(Error::InsufficientPrimeTable {
            limit: primes.limit(),
            needed: root,
        });
    }
    let terms_in_range = primes.primes_up_to(root);
    let terms = terms_in_range.len() as u64;
    let mut chi = 1u8;
    for &p in terms_in_range {
        if pool.eval(n, p)?.e_value == 0 {
            chi = 0;
            break;
        }
    }
    Ok(ChiResult {
        n,
        chi,
        form: ChiForm::PrimesOnly,
        strategy: pool.strategy(),
        terms_evaluated: terms,
    })
}

fn check_pi_args(x: u64, caps: &Caps) -> Result<()> {
    check_n_at_least_2(x)?;
    if x > caps.pi_limit {
        return Err(Error::CapExceeded {
            what: "pi",
            requested: x,
            cap: caps.pi_limit,
        });
    }
    Ok(())
}

/// π(x) as the sum of the all-integers χ over `n ∈ [2, x]`.
pub fn pi_v1(x: u64, strategy: EvalStrategy, caps: &Caps) -> Result<PiResult> {
    check_pi_args(x, caps)?;
    let mut pool = EvalPool::new(strategy, caps);
    let mut count = 0u64;
    for n in 2..=x {
        count += u64::from(chi_all_integers_pooled(n, &mut pool)?.chi);
    }
    Ok(PiResult {
        x,
        count,
        form: PiForm::V1,
    })
}

/// π(x) as the sum of the primes-only χ over `n ∈ [2, x]`.
///
/// With [`PrimeSource::Oracle`] the inner prime table comes from the sieve;
/// with [`PrimeSource::Bootstrap`] it is grown by the formula itself: each
/// candidate `c` is admitted as prime exactly when the primes-only χ — using
/// only previously admitted primes, which always cover `√c` — evaluates to 1.
pub fn pi_v2(x: u64, strategy: EvalStrategy, source: PrimeSource, caps: &Caps) -> Result<PiResult> {
    check_pi_args(x, caps)?;
    let mut pool = EvalPool::new(strategy, caps);
    let root = x.isqrt();
    let mut count = 0u64;
    match source {
        PrimeSource::Oracle => {
            let table = if root >= 2 {
                sieve(root, caps)?
            } else {
                PrimeTable::empty()
            };
            for n in 2..=x {
                count += u64::from(chi_primes_only_pooled(n, &table, &mut pool)?.chi);
            }
        }
        PrimeSource::Bootstrap => {
            let mut table = PrimeTable::empty();
            for n in 2..=x {
                let need = n.isqrt();
                while table.limit < need {
                    let c = table.limit + 1;
                    // The table covers √c whenever it covers c − 1, so the
                    // formula can judge its own next candidate.
                    if chi_primes_only_pooled(c, &table, &mut pool)?.chi == 1 {
                        table.primes.push(c);
                    }
                    table.limit = c;
                }
                count += u64::from(chi_primes_only_pooled(n, &table, &mut pool)?.chi);
            }
        }
    }
    Ok(PiResult {
        x,
        count,
        form: PiForm::V2,
    })
}

/// ω(n): the number of distinct prime factors, as `Σ_{p ≤ n} (1 − E_p(n))`.
pub fn omega_formula(
    n: u64,
    strategy: EvalStrategy,
    primes: &PrimeTable,
    caps: &Caps,
) -> Result<OmegaResult> {
    let mut pool = EvalPool::new(strategy, caps);
    omega_formula_pooled(n, primes, &mut pool)
}

/// Pooled variant of [`omega_formula`] for bulk drivers.
pub fn omega_formula_pooled(
    n: u64,
    primes: &PrimeTable,
    pool: &mut EvalPool,
) -> Result<OmegaResult> {
    check_n_at_least_2(n)?;
    let caps = *pool.caps();
    if n > caps.omega_limit {
        return Err(Error::CapExceeded {
            what: "omega",
            requested: n,
            cap: caps.omega_limit,
        });
    }
    if !primes.covers(n) {
        return Err(Error::InsufficientPrimeTable {
            limit: primes.limit(),
            needed: n,
        });
    }
    let mut contributing = Vec::new();
    for &p in primes.primes_up_to(n) {
        // The summand 1 − E_p(n) is 1 exactly when the indicator reports a
        // multiple, i.e. when p | n.
        if pool.eval(n, p)?.e_value == 0 {
            contributing.push(p);
        }
    }
    Ok(OmegaResult {
        n,
        omega: contributing.len() as u64,
        contributing_primes: contributing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::EvalStrategy::ReducedTable;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn chi_empty_product_edge() {
        for n in [2u64, 3] {
            let c = chi_all_integers(n, ReducedTable, &caps()).unwrap();
            assert_eq!((c.chi, c.terms_evaluated), (1, 0), "n={n}");
            let t = sieve(2, &caps()).unwrap();
            let c = chi_primes_only(n, ReducedTable, &t, &caps()).unwrap();
            assert_eq!((c.chi, c.terms_evaluated), (1, 0), "n={n}");
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_all_integers(4, ReducedTable, &caps()).unwrap().chi, 0);
        assert_eq!(chi_all_integers(29, ReducedTable, &caps()).unwrap().chi, 1);
        let t = sieve(10, &caps()).unwrap();
        assert_eq!(chi_primes_only(25, ReducedTable, &t, &caps()).unwrap().chi, 0);
        assert_eq!(chi_primes_only(97, ReducedTable, &t, &caps()).unwrap().chi, 1);
        assert_eq!(chi_primes_only(3, ReducedTable, &t, &caps()).unwrap().chi, 1);
    }

    #[test]
    fn chi_terms_counts_the_formal_range() {
        // n = 49: [2, 7] holds 6 integers, 4 primes; 49 = 7² is composite
        // via the boundary term only.
        let c = chi_all_integers(49, ReducedTable, &caps()).unwrap();
        assert_eq!((c.chi, c.terms_evaluated), (0, 6));
        let t = sieve(7, &caps()).unwrap();
        let c = chi_primes_only(49, ReducedTable, &t, &caps()).unwrap();
        assert_eq!((c.chi, c.terms_evaluated), (0, 4));
    }

    #[test]
    fn chi_rejects_small_n_and_short_tables() {
        assert!(matches!(
            chi_all_integers(1, ReducedTable, &caps()),
            Err(Error::InvalidInput(_))
        ));
        let t = sieve(2, &caps()).unwrap();
        assert!(matches!(
            chi_primes_only(100, ReducedTable, &t, &caps()),
            Err(Error::InsufficientPrimeTable { limit: 2, needed: 10 })
        ));
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi_v1(2, ReducedTable, &caps()).unwrap().count, 1);
        assert_eq!(pi_v1(10, ReducedTable, &caps()).unwrap().count, 4);
        assert_eq!(pi_v1(100, ReducedTable, &caps()).unwrap().count, 25);
        let v2 = |x| pi_v2(x, ReducedTable, PrimeSource::Oracle, &caps()).unwrap().count;
        assert_eq!(v2(3), 2);
        assert_eq!(v2(10), 4);
        assert_eq!(v2(1000), 168);
    }

    #[test]
    fn pi_bootstrap_matches_oracle_mode() {
        for x in [2u64, 3, 4, 10, 50, 120, 1000] {
            let a = pi_v2(x, ReducedTable, PrimeSource::Bootstrap, &caps()).unwrap();
            let b = pi_v2(x, ReducedTable, PrimeSource::Oracle, &caps()).unwrap();
            assert_eq!(a, b, "x={x}");
        }
    }

    #[test]
    fn pi_respects_cap() {
        let tight = Caps { pi_limit: 50, ..caps() };
        assert!(matches!(
            pi_v1(51, ReducedTable, &tight),
            Err(Error::CapExceeded { what: "pi", .. })
        ));
        assert!(matches!(
            pi_v2(51, ReducedTable, PrimeSource::Oracle, &tight),
            Err(Error::CapExceeded { what: "pi", .. })
        ));
    }

    #[test]
    fn omega_examples() {
        let t = sieve(30, &caps()).unwrap();
        let w = |n| omega_formula(n, ReducedTable, &t, &caps()).unwrap();
        assert_eq!(w(2), OmegaResult { n: 2, omega: 1, contributing_primes: vec![2] });
        assert_eq!(w(12).contributing_primes, vec![2, 3]);
        assert_eq!(w(30).contributing_primes, vec![2, 3, 5]);
        assert_eq!(w(8), OmegaResult { n: 8, omega: 1, contributing_primes: vec![2] });
    }

    #[test]
    fn omega_rejects_caps_and_short_tables() {
        let t = sieve(30, &caps()).unwrap();
        assert!(matches!(
            omega_formula(31, ReducedTable, &t, &caps()),
            Err(Error::InsufficientPrimeTable { limit: 30, needed: 31 })
        ));
        let tight = Caps { omega_limit: 20, ..caps() };
        assert!(matches!(
            omega_formula(25, ReducedTable, &t, &tight),
            Err(Error::CapExceeded { what: "omega", .. })
        ));
    }

    #[test]
    fn isqrt_brackets_perfect_squares() {
        for n in 2u64..=20_000 {
            let r = n.isqrt();
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n={n}");
        }
        for r in [3u64, 10, 100, 1000, 65535] {
            assert_eq!((r * r).isqrt(), r);
            assert_eq!((r * r - 1).isqrt(), r - 1);
            assert_eq!((r * r + 1).isqrt(), r);
        }
    }
}
