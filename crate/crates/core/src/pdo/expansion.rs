use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::action::apply;
use crate::algebra::{indices_of_total, MultiIndex, TorusElement};
use crate::error::{NctError, Result};
use crate::symbols::{check_point, Symbol};

/// Truncated asymptotic sum `sum_{|l| < N}` with its per-level terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResult {
    /// Truncation `N`.
    pub order: usize,
    pub at: Vec<f64>,
    pub value: TorusElement,
    /// `terms[L]` collects all `l` with `|l| = L`.
    pub terms: Vec<TorusElement>,
    /// `||value - oracle||_0` when an oracle comparison was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

fn require_terms(n_terms: usize) -> Result<()> {
    if n_terms == 0 {
        return Err(NctError::Precondition("expansion order N must be at least 1".into()));
    }
    Ok(())
}

fn assemble(order: usize, xi: &[f64], terms: Vec<TorusElement>) -> ExpansionResult {
    let mut value = TorusElement::zero(terms[0].theta());
    for t in &terms {
        value.add_scaled(t, Complex64::ONE);
    }
    ExpansionResult {
        order,
        at: xi.to_vec(),
        value,
        terms,
        residual: None,
    }
}

/// Exact adjoint symbol `[sum_m rho_m(xi - m) U^m]^*`, where `rho_m` is the
/// `m`-th coefficient function of the symbol.
pub fn adjoint_oracle(sym: &dyn Symbol, xi: &[f64]) -> Result<TorusElement> {
    check_point(sym, xi)?;
    let theta = sym.theta();
    let mut shifted = TorusElement::zero(theta);
    for m in sym.modes() {
        let point: Vec<f64> = xi.iter().zip(m.iter()).map(|(x, &k)| x - k as f64).collect();
        let c = sym.eval(&point).coeff(&m);
        shifted.add_scaled(&TorusElement::word(theta, m), c);
    }
    Ok(shifted.star())
}

/// `sum_{|l| < N} (1/l!) d^l delta^l (rho(xi))^*`.
pub fn adjoint_expansion(sym: &dyn Symbol, xi: &[f64], n_terms: usize) -> Result<ExpansionResult> {
    check_point(sym, xi)?;
    require_terms(n_terms)?;
    let n = sym.dim();
    let mut terms = Vec::with_capacity(n_terms);
    for level in 0..n_terms {
        let mut t = TorusElement::zero(sym.theta());
        for l in indices_of_total(n, level) {
            let d = sym.deriv(&l, xi)?.star().delta(&l)?;
            t.add_scaled(&d, Complex64::new(1.0 / l.factorial(), 0.0));
        }
        terms.push(t);
    }
    Ok(assemble(n_terms, xi, terms))
}

/// Symbol of `P_phi P_rho` at the integer point `m`, by applying both
/// operators to `U^m`.
pub fn compose_oracle(phi: &dyn Symbol, rho: &dyn Symbol, m: &MultiIndex) -> Result<TorusElement> {
    if **phi.theta() != **rho.theta() {
        return Err(NctError::ThetaMismatch);
    }
    // symbol_of_operator of a -> P_phi(P_rho(a)), with errors propagated
    let word = TorusElement::word(phi.theta(), m.clone());
    let image = apply(phi, &apply(rho, &word)?)?;
    image.try_mul(&word.star())
}

/// `sum_{|l| < N} (1/l!) d^l phi(xi) delta^l rho(xi)`.
pub fn compose_expansion(
    phi: &dyn Symbol,
    rho: &dyn Symbol,
    xi: &[f64],
    n_terms: usize,
) -> Result<ExpansionResult> {
    if **phi.theta() != **rho.theta() {
        return Err(NctError::ThetaMismatch);
    }
    check_point(phi, xi)?;
    require_terms(n_terms)?;
    let n = phi.dim();
    let rho_xi = rho.eval(xi);
    let mut terms = Vec::with_capacity(n_terms);
    for level in 0..n_terms {
        let mut t = TorusElement::zero(phi.theta());
        for l in indices_of_total(n, level) {
            let right = rho_xi.delta(&l)?;
            if right.is_zero() {
                continue;
            }
            let prod = phi.deriv(&l, xi)?.try_mul(&right)?;
            t.add_scaled(&prod, Complex64::new(1.0 / l.factorial(), 0.0));
        }
        terms.push(t);
    }
    Ok(assemble(n_terms, xi, terms))
}
