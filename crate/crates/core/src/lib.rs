//! Numerical laboratory for Brouwer's conjecture on weighted graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: weighted graphs, their Laplacians and total edge weight `e(G)`.
//! - [`spectral`]: a dense symmetric eigensolver (Householder reduction plus
//!   implicit-shift QR) returning descending eigenvalues with prefix sums.
//! - [`conjecture`]: per-`k` margins `e(G) + C(k+1,2) - S_k`.
//! - [`ensembles`]: bounded random weighted graph families with reproducible
//!   counter-based seeding.
//! - [`bounds`]: the quadratic-in-`k` discriminant lemmas, the Hoeffding tail
//!   bound and the composed finite-`n` lower bound.
//! - [`experiments`]: Monte Carlo trials, exhaustive enumeration of labeled
//!   graphs, `lambda_max` concentration tables and tail studies.

pub mod bounds;
pub mod conjecture;
pub mod ensembles;
mod error;
pub mod experiments;
pub mod graph;
pub mod spectral;

pub use error::{Error, Result};

/// `C(m, 2)` in exact integer arithmetic.
pub fn choose2(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2
}
