//! Computational verification toolkit for representations `c = F_k - p^l`
//! of an integer as a Fibonacci number minus a power of a fixed prime.
//!
//! The crate is organised bottom-up:
//!
//! - [`fib`], [`primality`], [`roots`], [`entry`]: exact Fibonacci/Lucas
//!   arithmetic, primality, integer roots and the order of appearance of a
//!   prime in the Fibonacci sequence.
//! - [`search`]: the exhaustive pair searches, representation counting and
//!   finite-window multiplicity scans, with a parallel, resumable harness.
//! - [`real`]: certified (interval) real arithmetic over dyadic rationals.
//! - [`bounds`]: logarithmic heights, lower bounds for linear forms in
//!   logarithms, and auditors that re-derive the constant chains.
//! - [`cfreduce`]: certified continued fractions and Legendre-style reduction.

pub mod bounds;
pub mod cfreduce;
pub mod decimal;
pub mod entry;
pub mod error;
pub mod fib;
pub mod primality;
pub mod real;
pub mod roots;
pub mod search;

pub use error::{Error, Result};

/// Nonnegative arbitrary-precision integer.
pub type Nat = num_bigint::BigUint;
/// Signed arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Index into the Fibonacci or Lucas sequence.
pub type FibIndex = u64;
