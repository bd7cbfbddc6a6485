//! The divisibility indicator `E_m(n)` and its evaluation strategies.
//!
//! For integers `m >= 2` and `n >= 1`,
//!
//! ```text
//! E_m(n) = 1 − ∏_{j=1}^{m−1} sin²((n+j)·π/m) / sin²(j·π/m)
//! ```
//!
//! equals 0 exactly when `m` divides `n` and 1 otherwise: the window
//! `n+1, ..., n+m−1` contains a multiple of `m` (zeroing one numerator
//! factor) precisely when `n` itself is not a multiple, while for `m | n`
//! every numerator factor collapses onto the matching denominator through the
//! periodicity and reflection symmetry of `sin²`.
//!
//! The computed product is rounded to an indicator bit by the ½-threshold
//! rule: `e_value = 0` if the raw product exceeds ½, else 1 — the maximal
//! separation between the two exact limit values.
//!
//! # Exactness of the reduced pathway
//!
//! `sin²(kπ/m)` depends only on `k mod 2m` (period) and is symmetric under
//! `k → m − k` and `k → 2m − k` (reflection). [`reduce_argument`] performs
//! the integer reduction and [`SineTable`] stores each distinct value once,
//! so the numerator and denominator of each factor are reads of the *same*
//! stored double whenever they are equal as exact reals. A quotient of
//! identical finite doubles is exactly 1.0, and a vanishing numerator is
//! exactly 0.0, which is why `ReducedTable` raw products are bit-exactly 0 or
//! 1 for every input — accuracy independent of `n`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::highprec::{to_f64, HighCtx};
use crate::strategy::{EvalStrategy, MIN_PRECISION_BITS};

/// Residue of `k` modulo `2m`, the exact integer argument reduction.
///
/// `sin²(kπ/m) = sin²(((k mod 2m))·π/m)` as exact reals, because the index
/// period of `sin²(·π/m)` is `2m`.
pub fn reduce_argument(k: u64, m: u64) -> u64 {
    debug_assert!(m >= 2);
    k % (2 * m)
}

/// Precomputed `sin²(jπ/m)` values, stored once per distinct magnitude.
///
/// Logically this is the array `values[j] = sin²(jπ/m)` for `j` in `[0, m]`;
/// physically only `j` in `[0, ⌊m/2⌋]` is stored and every other index is
/// folded onto that half by the reflection symmetry, so equal exact values
/// are guaranteed to be *identical* doubles. Angles whose reduced denominator
/// is 1, 2, 3, 4, or 6 — the rational multiples of π with rational sin²,
/// namely sin² ∈ {0, 1, 3/4, 1/2, 1/4} — are stored from exact constants
/// rather than the libm sine, so e.g. `values(m/4)` of `m = 4k` is exactly
/// 0.5.
#[derive(Debug, Clone, PartialEq)]
pub struct SineTable {
    m: u64,
    half: Vec<f64>,
}

impl SineTable {
    /// Build the table for modulus `m` (within the configured cap).
    pub fn build(m: u64, caps: &Caps) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
        if m > caps.max_table_modulus {
            return Err(Error::TableCapExceeded {
                m,
                cap: caps.max_table_modulus,
            });
        }
        let half = (0..=m / 2).map(|i| sin_sq_exact_or_f64(i, m)).collect();
        Ok(SineTable { m, half })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// `sin²(jπ/m)` for `j` in `[0, m]`.
    pub fn value(&self, j: u64) -> f64 {
        debug_assert!(j <= self.m);
        self.half[j.min(self.m - j) as usize]
    }

    /// `sin²(rπ/m)` for a residue `r` in `[0, 2m)`: indices `j`, `m−j`,
    /// `m+j`, and `2m−j` all read the identical stored value.
    pub fn value_at_residue(&self, r: u64) -> f64 {
        debug_assert!(r < 2 * self.m);
        let r = if r >= self.m { r - self.m } else { r };
        self.half[r.min(self.m - r) as usize]
    }
}

/// Operation-style alias for [`SineTable::build`].
pub fn build_sine_table(m: u64, caps: &Caps) -> Result<SineTable> {
    SineTable::build(m, caps)
}

/// `sin²(iπ/m)` with the exactly-representable rational angles special-cased.
fn sin_sq_exact_or_f64(i: u64, m: u64) -> f64 {
    let d = m / gcd(i, m);
    match d {
        1 => 0.0,        // sin²(0) and sin²(π)
        2 => 1.0,        // sin²(π/2)
        3 => 0.75,       // sin²(π/3), sin²(2π/3)
        4 => 0.5,        // sin²(π/4), sin²(3π/4)
        6 => 0.25,       // sin²(π/6), sin²(5π/6)
        _ => {
            let s = ((i as f64) * PI / (m as f64)).sin();
            s * s
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The computed indicator for one `(n, m)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorResult {
    pub n: u64,
    pub m: u64,
    /// Value of the sine-ratio product as computed by the strategy (before
    /// the `1 − ...`). Exactly 0.0 or 1.0 under `ReducedTable`.
    pub raw_product: f64,
    /// `1 − raw_product` rounded by the ½-threshold rule: 0 iff `m | n`.
    pub e_value: u8,
    pub strategy: EvalStrategy,
}

/// One factor of the product, reported by the diagnostic dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorEntry {
    pub j: u64,
    /// The integer `n + j` whose sine the numerator takes.
    pub numerator_arg: u64,
    /// `sin²((n+j)·π/m)` as computed by the strategy.
    pub numerator: f64,
    /// `sin²(jπ/m)` as computed by the strategy.
    pub denominator: f64,
    pub ratio: f64,
}

/// Per-factor diagnostic dump for one `(n, m)` pair. Unlike [`indicator_e`],
/// the dump never short-circuits: every factor is evaluated and listed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorDump {
    pub n: u64,
    pub m: u64,
    pub strategy: EvalStrategy,
    pub raw_product: f64,
    pub e_value: u8,
    pub factors: Vec<FactorEntry>,
}

enum Inner {
    Reduced(SineTable),
    Naive { mf: f64, den: Vec<f64> },
    High(Box<HighCtx>),
}

/// Reusable per-modulus evaluator.
///
/// Construction precomputes the strategy's denominator table for `m`;
/// [`ModulusEval::eval`] then costs at most `m − 1` factor evaluations per
/// `n`. The bulk drivers (prime counting, omega, verification and precision
/// sweeps) hold one of these per modulus instead of rebuilding tables for
/// every `n`. Evaluation takes `&mut self` because the high-precision
/// backend caches constants; results are pure functions of `(n, m, strategy)`
/// regardless.
pub struct ModulusEval {
    m: u64,
    strategy: EvalStrategy,
    inner: Inner,
}

impl ModulusEval {
    pub fn new(m: u64, strategy: EvalStrategy, caps: &Caps) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
        // Every strategy precomputes O(m) denominators, so the table cap
        // applies uniformly.
        if m > caps.max_table_modulus {
            return Err(Error::TableCapExceeded {
                m,
                cap: caps.max_table_modulus,
            });
        }
        let inner = match strategy {
            EvalStrategy::ReducedTable => Inner::Reduced(SineTable::build(m, caps)?),
            EvalStrategy::NaiveFloat => {
                let mf = m as f64;
                let den = (1..m).map(|j| naive_sin_sq(j, mf)).collect();
                Inner::Naive { mf, den }
            }
            EvalStrategy::HighPrecision { precision_bits } => {
                if precision_bits < MIN_PRECISION_BITS {
                    return Err(Error::PrecisionTooLow(precision_bits));
                }
                Inner::High(Box::new(HighCtx::new(m, precision_bits)))
            }
        };
        Ok(ModulusEval { m, strategy, inner })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn strategy(&self) -> EvalStrategy {
        self.strategy
    }

    fn validate_n(&self, n: u64) -> Result<()> {
        if n < 1 {
            return Err(Error::InvalidInput(format!("n must be at least 1, got {n}")));
        }
        let max = self.strategy.max_exact_n();
        if n > max || n.checked_add(self.m - 1).is_none() {
            return Err(Error::WidthExceeded {
                n,
                strategy: self.strategy.name(),
                max,
            });
        }
        Ok(())
    }

    /// Evaluate `E_m(n)`.
    pub fn eval(&mut self, n: u64) -> Result<IndicatorResult> {
        self.validate_n(n)?;
        let (raw_product, e_value) = match &mut self.inner {
            Inner::Reduced(table) => {
                let mut raw = 1.0f64;
                for j in 1..self.m {
                    let num = table.value_at_residue(reduce_argument(n + j, self.m));
                    if num == 0.0 {
                        // One exact zero factor zeroes the exact product; the
                        // remaining factors are finite, so stopping here is
                        // value-identical and skips the dead work.
                        raw = 0.0;
                        break;
                    }
                    raw *= num / table.value(j);
                }
                (raw, classify_f64(raw))
            }
            Inner::Naive { mf, den } => {
                let mut raw = 1.0f64;
                for j in 1..self.m {
                    raw *= naive_sin_sq(n + j, *mf) / den[(j - 1) as usize];
                }
                (raw, classify_f64(raw))
            }
            Inner::High(ctx) => {
                let raw = ctx.eval(n);
                (to_f64(&raw), ctx.classify(&raw))
            }
        };
        Ok(IndicatorResult {
            n,
            m: self.m,
            raw_product,
            e_value,
            strategy: self.strategy,
        })
    }

    /// Per-factor diagnostic dump (no short-circuiting).
    pub fn factor_dump(&mut self, n: u64) -> Result<FactorDump> {
        self.validate_n(n)?;
        let m = self.m;
        let mut factors = Vec::with_capacity((m - 1) as usize);
        let (raw_product, e_value) = match &mut self.inner {
            Inner::Reduced(table) => {
                let mut raw = 1.0f64;
                for j in 1..m {
                    let num = table.value_at_residue(reduce_argument(n + j, m));
                    let den = table.value(j);
                    let ratio = num / den;
                    factors.push(FactorEntry {
                        j,
                        numerator_arg: n + j,
                        numerator: num,
                        denominator: den,
                        ratio,
                    });
                    raw *= ratio;
                }
                (raw, classify_f64(raw))
            }
            Inner::Naive { mf, den } => {
                let mut raw = 1.0f64;
                for j in 1..m {
                    let num = naive_sin_sq(n + j, *mf);
                    let d = den[(j - 1) as usize];
                    let ratio = num / d;
                    factors.push(FactorEntry {
                        j,
                        numerator_arg: n + j,
                        numerator: num,
                        denominator: d,
                        ratio,
                    });
                    raw *= ratio;
                }
                (raw, classify_f64(raw))
            }
            Inner::High(ctx) => {
                let mut raw = ctx.one();
                for j in 1..m {
                    let num = ctx.sin_sq_of_int(n + j);
                    let den = ctx.denominator(j);
                    factors.push(FactorEntry {
                        j,
                        numerator_arg: n + j,
                        numerator: to_f64(&num),
                        denominator: to_f64(den),
                        ratio: to_f64(&num) / to_f64(den),
                    });
                    raw = ctx.accumulate(raw, &num, j);
                }
                (to_f64(&raw), ctx.classify(&raw))
            }
        };
        Ok(FactorDump {
            n,
            m,
            strategy: self.strategy,
            raw_product,
            e_value,
            factors,
        })
    }

}

/// The ½-threshold rule on an f64 product (NaN conservatively maps to 1,
/// i.e. "not a multiple"; no valid input produces NaN).
fn classify_f64(raw: f64) -> u8 {
    if raw > 0.5 {
        0
    } else {
        1
    }
}

/// Literal f64 `sin²(kπ/m)`: the argument is computed as `(k·π)/m` in f64
/// with no reduction — this rounding of the *argument* is exactly the error
/// source the precision lab studies.
pub(crate) fn naive_sin_sq(k: u64, mf: f64) -> f64 {
    let s = ((k as f64) * PI / mf).sin();
    s * s
}

/// One-shot evaluation of `E_m(n)` under `strategy`.
///
/// Bulk callers should hold a [`ModulusEval`] (or an [`EvalPool`]) instead so
/// the per-modulus denominator table is built once.
pub fn indicator_e(n: u64, m: u64, strategy: EvalStrategy, caps: &Caps) -> Result<IndicatorResult> {
    ModulusEval::new(m, strategy, caps)?.eval(n)
}

/// One-shot per-factor dump for `(n, m)` under `strategy`.
pub fn factor_dump(n: u64, m: u64, strategy: EvalStrategy, caps: &Caps) -> Result<FactorDump> {
    ModulusEval::new(m, strategy, caps)?.factor_dump(n)
}

/// Cache of [`ModulusEval`] contexts keyed by modulus, for drivers that sweep
/// many `(n, m)` pairs.
pub struct EvalPool {
    strategy: EvalStrategy,
    caps: Caps,
    pool: BTreeMap<u64, ModulusEval>,
}

impl EvalPool {
    pub fn new(strategy: EvalStrategy, caps: &Caps) -> Self {
        EvalPool {
            strategy,
            caps: *caps,
            pool: BTreeMap::new(),
        }
    }

    pub fn strategy(&self) -> EvalStrategy {
        self.strategy
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn eval(&mut self, n: u64, m: u64) -> Result<IndicatorResult> {
        use std::collections::btree_map::Entry;
        let ev = match self.pool.entry(m) {
            Entry::Occupied(o) => o.into_mut(),
            Entry::Vacant(v) => v.insert(ModulusEval::new(m, self.strategy, &self.caps)?),
        };
        ev.eval(n)
    }
}
