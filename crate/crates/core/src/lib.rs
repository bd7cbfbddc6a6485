//! A trigonometric characteristic function for the primes.
//!
//! This crate implements the sine-product divisibility indicator
//!
//! ```text
//! E_m(n) = 1 − ∏_{j=1}^{m−1} sin²((n+j)·π/m) / sin²(j·π/m)
//! ```
//!
//! which equals 0 exactly when `m` divides `n` and 1 otherwise, together
//! with the functions built from it:
//!
//! * χ(n) — the characteristic function of the primes, as a product of
//!   `E_m(n)` over the integers (or just the primes) in `[2, √n]`
//!   ([`formulas::chi_all_integers`], [`formulas::chi_primes_only`]);
//! * π(x) — the prime-counting function, as the sum of χ over `[2, x]`
//!   ([`formulas::pi_v1`], [`formulas::pi_v2`]);
//! * ω(n) — the number of distinct prime factors, as a sum of `1 − E_p(n)`
//!   over primes `p ≤ n` ([`formulas::omega_formula`]).
//!
//! Everything can be evaluated under three numerical strategies
//! ([`EvalStrategy`]): a deliberately naive f64 pathway, an exact
//! residue-reduced table pathway (the default and recommended one), and an
//! arbitrary-precision pathway. Classical integer oracles ([`oracle`])
//! provide ground truth, [`verify`] sweeps formulas against oracles
//! end-to-end, and the precision lab ([`precision`]) quantifies how the
//! literal floating-point evaluation degrades and how many mantissa bits it
//! needs.
//!
//! ```
//! use primesine::{Caps, EvalStrategy};
//! use primesine::formulas::chi_all_integers;
//!
//! let caps = Caps::default();
//! let chi = chi_all_integers(29, EvalStrategy::ReducedTable, &caps).unwrap();
//! assert_eq!(chi.chi, 1); // 29 is prime
//! ```

pub mod config;
pub mod error;
pub mod formulas;
mod highprec;
pub mod indicator;
pub mod oracle;
pub mod precision;
pub mod strategy;
pub mod verify;

pub use config::Caps;
pub use error::{Error, Result};
pub use strategy::{EvalStrategy, MIN_PRECISION_BITS};
