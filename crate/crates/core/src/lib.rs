//! Numerical toolkit for four-square representations with almost-prime
//! products: exponential sums, local densities, the singular integral, the
//! linear lower-bound sieve and desk-scale enumeration of solutions.

pub mod arith;
pub mod compensated;
pub mod error;
pub mod expsum;
pub mod lagrange;
pub mod localdata;
pub mod oscillatory;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
