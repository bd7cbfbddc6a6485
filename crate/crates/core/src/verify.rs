//! End-to-end agreement sweep between the trigonometric formulas and the
//! classical integer oracles.
//!
//! For every `n` in `[2, max]` the sweep checks, under one chosen strategy:
//!
//! * χ over all integers and χ over primes only, against trial division;
//! * the running sums Σχ (which *are* π(n) in both forms, by definition)
//!   against the sieve's prime count at `n`;
//! * ω(n) against the factorization oracle's distinct-prime count, for `n`
//!   within the omega cap (the formula's cost per `n` grows quadratically,
//!   so the cap keeps sweeps bounded; with default caps every `n ≤ 10^4`
//!   is covered).
//!
//! A value of `n` "agrees" when every applicable check passes. The sweep is
//! fully deterministic: identical inputs produce identical reports.

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::formulas::{chi_all_integers_pooled, chi_primes_only_pooled, omega_formula_pooled};
use crate::indicator::EvalPool;
use crate::oracle::{factorize, is_prime_trial, sieve};
use crate::strategy::EvalStrategy;

/// First point of disagreement between a formula and an oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub n: u64,
    /// Which check failed: `chi-integers`, `chi-primes`, `pi-v1`, `pi-v2`, or `omega`.
    pub check: String,
    pub details: String,
}

/// Outcome of a verification sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max: u64,
    pub strategy: EvalStrategy,
    /// Number of values checked: the integers in `[2, max]`.
    pub checked: u64,
    /// Number of those values on which all checks agreed.
    pub agreements: u64,
    pub all_agree: bool,
    /// Final running sums: π(max) per the two formulas and per the sieve.
    pub pi_formula_v1: u64,
    pub pi_formula_v2: u64,
    pub pi_sieve: u64,
    /// ω was checked for n up to this bound (the omega cap may cut it off).
    pub omega_checked_up_to: u64,
    pub first_disagreement: Option<Disagreement>,
}

impl VerifyReport {
    /// Human summary, e.g. `4999/4999 agree`.
    pub fn summary(&self) -> String {
        format!("{}/{} agree", self.agreements, self.checked)
    }
}

/// Run the full oracle-equivalence sweep up to `max`.
pub fn run_verify(max: u64, strategy: EvalStrategy, caps: &Caps) -> Result<VerifyReport> {
    if max < 2 {
        return Err(Error::InvalidInput(format!(
            "verification needs max >= 2, got {max}"
        )));
    }
    let table = sieve(max, caps)?;
    let omega_bound = max.min(caps.omega_limit);
    let mut pool = EvalPool::new(strategy, caps);

    let mut agreements = 0u64;
    let mut first: Option<Disagreement> = None;
    let mut sum_v1 = 0u64;
    let mut sum_v2 = 0u64;
    let mut sieve_count = 0u64;
    let mut sieve_idx = 0usize;

    for n in 2..=max {
        let mut fail: Option<Disagreement> = None;

        let oracle_prime = is_prime_trial(n);
        let want = u8::from(oracle_prime);

        let c1 = chi_all_integers_pooled(n, &mut pool)?;
        if c1.chi != want && fail.is_none() {
            fail = Some(Disagreement {
                n,
                check: "chi-integers".into(),
                details: format!("chi = {}, trial division says {}", c1.chi, want),
            });
        }

        let c2 = chi_primes_only_pooled(n, &table, &mut pool)?;
        if c2.chi != want && fail.is_none() {
            fail = Some(Disagreement {
                n,
                check: "chi-primes".into(),
                details: format!("chi = {}, trial division says {}", c2.chi, want),
            });
        }

        sum_v1 += u64::from(c1.chi);
        sum_v2 += u64::from(c2.chi);
        while sieve_idx < table.len() && table.primes()[sieve_idx] <= n {
            sieve_idx += 1;
        }
        sieve_count = sieve_idx as u64;
        if sum_v1 != sieve_count && fail.is_none() {
            fail = Some(Disagreement {
                n,
                check: "pi-v1".into(),
                details: format!("running sum {} vs sieve count {}", sum_v1, sieve_count),
            });
        }
        if sum_v2 != sieve_count && fail.is_none() {
            fail = Some(Disagreement {
                n,
                check: "pi-v2".into(),
                details: format!("running sum {} vs sieve count {}", sum_v2, sieve_count),
            });
        }

        if n <= omega_bound {
            let w = omega_formula_pooled(n, &table, &mut pool)?;
            let f = factorize(n, caps)?;
            let ok = w.omega == f.distinct_count() as u64
                && w.contributing_primes
                    .iter()
                    .zip(f.factors().iter())
                    .all(|(&p, &(q, _))| p == q)
                && w.contributing_primes.len() == f.distinct_count();
            if !ok && fail.is_none() {
                fail = Some(Disagreement {
                    n,
                    check: "omega".into(),
                    details: format!(
                        "formula omega = {} ({:?}), factorization says {}",
                        w.omega,
                        w.contributing_primes,
                        f.distinct_count()
                    ),
                });
            }
        }

        match fail {
            None => agreements += 1,
            Some(d) => {
                if first.is_none() {
                    first = Some(d);
                }
            }
        }
    }

    let checked = max - 1;
    Ok(VerifyReport {
        max,
        strategy,
        checked,
        agreements,
        all_agree: agreements == checked && first.is_none(),
        pi_formula_v1: sum_v1,
        pi_formula_v2: sum_v2,
        pi_sieve: sieve_count,
        omega_checked_up_to: omega_bound,
        first_disagreement: first,
    })
}
