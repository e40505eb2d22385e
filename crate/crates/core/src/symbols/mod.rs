//! Symbols: smooth maps `xi -> A_theta` with a declared order and exact or
//! finite-difference derivatives in `xi`.

mod callback;
mod json;
mod lambda;
mod order;
mod polynomial;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};

pub use callback::{CallbackSymbol, FdConfig};
pub use json::SymbolSpec;
pub use lambda::LambdaSymbol;
pub use order::{verify_order, IndexConstant, OrderVerification, SymbolGrid, DEFAULT_RADII};
pub use polynomial::PolynomialSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Polynomial,
    Lambda,
    Callback,
}

/// A symbol `rho: R^n -> A_theta` of declared order `d`.
pub trait Symbol: Send + Sync + fmt::Debug {
    fn theta(&self) -> &Arc<Theta>;

    fn dim(&self) -> usize {
        self.theta().dim()
    }

    fn order(&self) -> f64;

    fn kind(&self) -> SymbolKind;

    /// `rho(xi)`. Panics if `xi.len() != self.dim()`.
    fn eval(&self, xi: &[f64]) -> TorusElement;

    /// `(d/dxi)^l rho(xi)`; `l = 0` is `eval`.
    fn deriv(&self, l: &MultiIndex, xi: &[f64]) -> Result<TorusElement>;

    /// Every mode on which some value `rho(xi)` may have a nonzero coefficient.
    fn modes(&self) -> Vec<MultiIndex>;

    /// Degree in `xi` when the symbol is a polynomial.
    fn polynomial_degree(&self) -> Option<usize> {
        None
    }
}

pub type SharedSymbol = Arc<dyn Symbol>;

/// Validates a derivative order and evaluation point against a symbol.
pub(crate) fn check_args(sym: &dyn Symbol, l: &MultiIndex, xi: &[f64]) -> Result<()> {
    check_point(sym, xi)?;
    if l.len() != sym.dim() {
        return Err(NctError::DimensionMismatch {
            expected: sym.dim(),
            found: l.len(),
        });
    }
    if !l.is_nonnegative() {
        return Err(NctError::NegativeDerivativeOrder(l.to_vec()));
    }
    Ok(())
}

pub(crate) fn check_point(sym: &dyn Symbol, xi: &[f64]) -> Result<()> {
    if xi.len() != sym.dim() {
        return Err(NctError::DimensionMismatch {
            expected: sym.dim(),
            found: xi.len(),
        });
    }
    Ok(())
}

/// Checked evaluation.
pub fn eval(sym: &dyn Symbol, xi: &[f64]) -> Result<TorusElement> {
    check_point(sym, xi)?;
    Ok(sym.eval(xi))
}

/// Checked derivative.
pub fn deriv(sym: &dyn Symbol, l: &MultiIndex, xi: &[f64]) -> Result<TorusElement> {
    check_args(sym, l, xi)?;
    sym.deriv(l, xi)
}
