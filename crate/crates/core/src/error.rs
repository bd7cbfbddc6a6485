//! Unified error type for the library.

use thiserror::Error;

/// Errors produced by library operations.
///
/// The first three variants describe resource limits (a configured cap or an
/// exact-integer width being exceeded); the rest are argument problems. The
/// CLI maps the former to exit code 3 and the latter to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A modulus exceeded the configured per-modulus table cap.
    #[error("modulus {m} exceeds the configured table cap {cap}")]
    TableCapExceeded { m: u64, cap: u64 },

    /// A range or limit argument exceeded its configured cap.
    #[error("{what} limit {requested} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    /// `n + m - 1` is not exactly representable under the chosen strategy.
    #[error("n = {n} exceeds the exact-width limit {max} of the {strategy} strategy")]
    WidthExceeded {
        n: u64,
        strategy: &'static str,
        max: u64,
    },

    /// An argument violated a precondition (n < 2, m < 2, empty range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The supplied prime table does not cover the required bound.
    #[error("prime table covers only [2, {limit}] but coverage up to {needed} is required")]
    InsufficientPrimeTable { limit: u64, needed: u64 },

    /// The high-precision strategy needs at least as many mantissa bits as f64.
    #[error("high-precision strategy requires at least 53 mantissa bits, got {0}")]
    PrecisionTooLow(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
