//! Numerical evaluation strategies.
//!
//! The indicator `E_m(n)` is an exact real-number expression; a strategy
//! selects how that expression is evaluated in finite precision:
//!
//! * [`EvalStrategy::NaiveFloat`] — textbook f64 evaluation of
//!   `sin((n+j)·π/m)` at the full, unreduced argument. Deliberately retained
//!   as the instrumented baseline whose degradation the precision lab
//!   measures: its accuracy decays as `n` grows because the argument itself
//!   is rounded before the sine is taken.
//! * [`EvalStrategy::ReducedTable`] — the production pathway. Integer
//!   arguments are reduced modulo `2m` and folded onto a shared half-table of
//!   `sin²(jπ/m)` values, so each numerator/denominator pair is a quotient of
//!   *identical stored doubles*. Raw products are bit-exactly `0.0` or `1.0`
//!   and accuracy is independent of `n`.
//! * [`EvalStrategy::HighPrecision`] — the same literal, unreduced evaluation
//!   as `NaiveFloat`, carried out in arbitrary-precision binary floats with a
//!   caller-chosen mantissa width of at least 53 bits. Used by the precision
//!   lab to show that added mantissa bits (rather than algebraic
//!   reformulation) also absorb the large-argument error.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Minimum mantissa width for [`EvalStrategy::HighPrecision`] (the f64 width).
pub const MIN_PRECISION_BITS: u32 = 53;

/// Which numerical pathway computes a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalStrategy {
    /// Literal f64 evaluation at the unreduced argument.
    NaiveFloat,
    /// Exact residue reduction mod `2m` plus a symmetry-folded sine table.
    ReducedTable,
    /// Literal evaluation in arbitrary-precision floats.
    HighPrecision { precision_bits: u32 },
}

impl EvalStrategy {
    /// A validated high-precision strategy (`precision_bits >= 53`).
    pub fn high_precision(precision_bits: u32) -> Result<Self> {
        if precision_bits < MIN_PRECISION_BITS {
            return Err(Error::PrecisionTooLow(precision_bits));
        }
        Ok(EvalStrategy::HighPrecision { precision_bits })
    }

    /// Short machine name: `naive`, `reduced`, or `highprec`.
    pub fn name(&self) -> &'static str {
        match self {
            EvalStrategy::NaiveFloat => "naive",
            EvalStrategy::ReducedTable => "reduced",
            EvalStrategy::HighPrecision { .. } => "highprec",
        }
    }

    /// Largest `n` for which `n + j` (j < m) is handled exactly.
    ///
    /// `NaiveFloat` converts `n + j` to f64, which is exact only up to
    /// `2^52 + m`; larger inputs are refused with a width error rather than
    /// silently rounding the *integer*. `ReducedTable` only ever needs
    /// `n mod 2m`, and `HighPrecision` represents the integer argument
    /// exactly before rounding, so both accept the full 63-bit signed range.
    pub fn max_exact_n(&self) -> u64 {
        match self {
            EvalStrategy::NaiveFloat => 1 << 52,
            EvalStrategy::ReducedTable | EvalStrategy::HighPrecision { .. } => i64::MAX as u64,
        }
    }
}

impl fmt::Display for EvalStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalStrategy::NaiveFloat => f.write_str("naive"),
            EvalStrategy::ReducedTable => f.write_str("reduced"),
            EvalStrategy::HighPrecision { precision_bits } => {
                write!(f, "highprec:{precision_bits}")
            }
        }
    }
}

impl FromStr for EvalStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(EvalStrategy::NaiveFloat),
            "reduced" => Ok(EvalStrategy::ReducedTable),
            _ => {
                if let Some(bits) = s.strip_prefix("highprec:") {
                    let bits: u32 = bits.parse().map_err(|_| {
                        Error::InvalidInput(format!(
                            "invalid precision bits '{bits}' (expected a positive integer)"
                        ))
                    })?;
                    EvalStrategy::high_precision(bits)
                } else {
                    Err(Error::InvalidInput(format!(
                        "unknown strategy '{s}' (expected naive | reduced | highprec:BITS)"
                    )))
                }
            }
        }
    }
}

impl serde::Serialize for EvalStrategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for EvalStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
