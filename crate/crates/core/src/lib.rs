//! q-analogue Euler-Zagier multiple zeta functions.
//!
//! The crate evaluates
//!
//! ```text
//! zeta_q(s_1, ..., s_r) = sum_{0 < n_1 < ... < n_r} prod_j q^{(s_j - 1) n_j} / [n_j]_q^{s_j}
//! ```
//!
//! with `[n]_q = (1 - q^n) / (1 - q)`, its analytic continuation in depth one and
//! two, and a collection of sum formulas and auxiliary series that can be checked
//! numerically against each other.
//!
//! Modules:
//! - [`qcore`]: q-integers, summation kernels, quadrature, special functions.
//! - [`qmzf`]: indices, domain checks and the evaluators themselves.
//! - [`sumformula`]: weighted sum formulas and the interpolated depth-two family.
//! - [`fseries`]: the auxiliary F-series and their shift identity.
//! - [`analysis`]: integral representations, pointwise bounds and decay fits.
//! - [`limits`]: `q -> 1` extrapolation and classical reference values.

pub mod analysis;
pub mod chain;
mod error;
pub mod fseries;
pub mod limits;
pub mod qcore;
pub mod qmzf;
pub mod sumformula;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qcore::{QParam, SummationResult, TruncationPolicy};
pub use qmzf::{MultiIndex, DomainReport};

/// Real scalar type used throughout; swap point for a higher precision backend.
pub type Scalar = f64;
