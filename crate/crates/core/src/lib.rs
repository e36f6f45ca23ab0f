//! Exact coefficients and combinatorial models for the causal-set d'Alembertian.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`coefficients`]: the layer coefficients `C_i^(d)` as exact rationals, their
//!   integer scaling by `2^(2⌊d/2⌋+2)`, and the floating operator constants
//!   `α_d`, `β_d`, `c_d`.
//! * [`genseries`]: truncated bivariate series with big-integer coefficients and the
//!   closed-form generating function of coloured noncrossing partial chord diagrams.
//! * [`diagrams`]: those diagrams themselves, their enumeration, the restricted
//!   classes counted by the scaled coefficients, and the insertion multisets that
//!   realise the alternating sum as cancellation.
//! * [`evenstrings`]: the even-dimension reduction to binary strings and lattice paths.
//! * [`causet`]: finite causal sets, layers, interval abundances, the operator
//!   `B^(d)` and the BDG action.
//! * [`sprinkling`]: Poisson sprinkling into a Minkowski causal diamond and Monte Carlo
//!   estimates of `B^(d)φ` at its top tip.
//!
//! File formats and the command-line tool live in the companion `dalembert` crate.

#![no_std]

extern crate alloc;

pub mod causet;
pub mod coefficients;
pub mod diagrams;
mod error;
pub mod evenstrings;
pub mod genseries;
pub mod sprinkling;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;

#[cfg(test)]
extern crate std;

#[cfg(test)]
mod proptests;
