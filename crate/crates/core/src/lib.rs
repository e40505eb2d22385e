//! Pseudodifferential calculus on the smooth noncommutative n-torus, at
//! finite truncation.
//!
//! - [`algebra`]: finitely supported elements, twisted multiplication, star,
//!   derivations, the torus action, trace and truncated GNS norms.
//! - [`symbols`]: symbols `xi -> A_theta` with exact or finite-difference
//!   derivatives and order verification.
//! - [`pdo`]: operator action, exact adjoint and composition symbols and
//!   their asymptotic expansions.
//! - [`sobolev`]: Sobolev norms, boundedness, embedding constants and
//!   Rellich extraction.
//! - [`module`]: matrices and vectors over the algebra, matrix symbols.
//! - [`oscillatory`]: regularized oscillatory integrals.
//! - [`harness`]: verification suites and reports.

pub mod algebra;
pub mod error;
pub mod harness;
pub mod io;
pub mod module;
pub mod oscillatory;
pub mod pdo;
pub mod quadrature;
pub mod random;
pub mod sobolev;
pub mod stats;
pub mod symbols;

pub use algebra::{MultiIndex, Theta, TorusElement};
pub use error::{NctError, Result};
pub use symbols::{SharedSymbol, Symbol};
