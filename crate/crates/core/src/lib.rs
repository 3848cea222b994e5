//! Picard groups of imaginary quadratic orders, Hilbert class polynomials,
//! and their roots over `F_p` for inert primes `p > |D|`.
//!
//! The number of `F_p`-roots of `H_D mod p` is either zero or
//! `|Pic(O)[2]| = 2^(mu - 1)`, and [`criterion::predict`] decides which case
//! occurs from congruence conditions on `p` and `D` alone. The [`harness`]
//! module checks both statements against direct computation.

pub mod arith;
pub mod classpoly;
pub mod criterion;
pub mod error;
pub mod gfp;
pub mod harness;
pub mod highprec;
pub mod quadform;

pub use error::{Error, Result};
pub use quadform::{ClassGroupTable, Discriminant, QuadForm};
