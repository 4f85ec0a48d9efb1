//! Fermat difference-of-squares factorization specialized to `4n² + 1` and
//! to Fermat numbers, with quadratic-residue sieving and a brute-force audit
//! of the divisor-form congruences.
//!
//! - [`arith`]: exact integer helpers (square roots, Legendre symbols,
//!   primality, small-prime sieve)
//! - [`quadform`]: candidate intervals, residue filters and the sieve for
//!   `N = 4n² + 1`
//! - [`fermat_generic`]: the textbook Fermat scan for any odd `N`
//! - [`fermat_numbers`]: Lucas-form and λ-centered searches on `F_n`
//! - [`audit`]: trial-division oracle and claim-by-claim counterexample ledger
//! - [`bench`]: candidate counts and timings of each strategy

pub mod arith;
pub mod audit;
pub mod bench;
pub mod error;
pub mod fermat_generic;
pub mod fermat_numbers;
pub mod json;
pub mod quadform;
mod walk;

pub use arith::Natural;
pub use error::{Error, Result};
