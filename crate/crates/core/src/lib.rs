//! Closed-form vector partition functions.
//!
//! `φ_A(b)` counts the nonnegative integer solutions of `Ax = b`. This crate
//! computes it as a sum of guarded quasi-polynomial terms by iterated partial
//! fraction decomposition of the generating function `∏ 1/(1 - z^{c_k})`,
//! one variable at a time, with all scalars kept exact in cyclotomic fields.
//! A brute-force lattice-point counter is included as an independent check.

pub mod arith;
pub mod error;
pub mod genfun;
pub mod oracle;
pub mod param;
pub mod pipeline;

pub use error::{Error, Result};
