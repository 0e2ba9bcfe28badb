//! Exact enumeration of k-tours on trees, counted by the hypergraph Catalan
//! numbers `c_n^(k)`.
//!
//! Three independent routes produce the same integers:
//!
//! - [`closed_form`]: a sum over root degrees and degree profiles of plane trees,
//! - [`series`]: the fixed point `A = z·φ(A)` and `C_k = z·H(A)` over exact
//!   rational power series, plus Lagrange inversion,
//! - [`oracle`]: brute-force enumeration of walks and of plane trees.
//!
//! [`asymptotics`] compares the exact values with their growth formulas and
//! counts tours on star-like trees; [`verify`] runs the cross-checks.

pub mod asymptotics;
pub mod closed_form;
pub mod combinatorics;
pub mod error;
pub mod oracle;
pub mod series;
pub mod verify;

pub use combinatorics::{ExactRatio, Natural};
pub use error::{Error, Result};
