//! # bindiv-core
//!
//! Exact engines for binomial-coefficient congruences and divisibility:
//!
//! * a restricted digit-vector bignum (`radix`) covering everything the
//!   constructions need — bigop small arithmetic in any radix;
//! * deterministic 64-bit primality, factorization, sieves, and prime
//!   search in arithmetic progressions (`primes`);
//! * Legendre / Kummer / Lucas machinery plus an exact small-binomial
//!   oracle and a factor-by-factor divisibility engine (`valuation`);
//! * checkers for the classical congruences of Babbage, Wolstenholme,
//!   Ljunggren and Jacobsthal (`classics`);
//! * constructive engines (`engines`): counterexample searches and
//!   two-digit constructions for the pn-1 family, the a = cp window
//!   theorems, the an-1 and an-a divisibility families, residue scans,
//!   and the residue witness machine.
//!
//! Everything is exact integer arithmetic; no floating point touches any
//! verdict. Range sweeps run data-parallel under the `parallel` feature
//! (default) with sequential fallbacks (`*_seq`) that the parallel paths
//! must match result-for-result.

pub mod arith;
pub mod classics;
pub mod engines;
pub mod error;
pub mod primes;
pub mod radix;
pub mod rat;
pub mod valuation;

pub use error::{Error, Result};
pub use radix::{digit_budget, set_digit_budget, DigitVector};
pub use rat::{rational, Rational};
