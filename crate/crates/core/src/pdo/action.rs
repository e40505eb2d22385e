use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{box_modes, MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};
use crate::symbols::Symbol;

fn check_theta(sym: &dyn Symbol, a: &TorusElement) -> Result<()> {
    if sym.dim() != a.dim() {
        return Err(NctError::DimensionMismatch {
            expected: sym.dim(),
            found: a.dim(),
        });
    }
    if **sym.theta() != **a.theta() {
        return Err(NctError::ThetaMismatch);
    }
    Ok(())
}

/// `P_rho(a) = sum_m rho(m) a_m U^m`.
pub fn apply(sym: &dyn Symbol, a: &TorusElement) -> Result<TorusElement> {
    check_theta(sym, a)?;
    let theta = sym.theta();
    let mut out = TorusElement::zero(theta);
    for (m, &c) in a.iter() {
        let word = TorusElement::monomial(theta, m.clone(), c);
        let term = sym.eval(&m.as_f64()).try_mul(&word)?;
        out.add_scaled(&term, Complex64::ONE);
    }
    Ok(out)
}

/// `sigma(m) = op(U^m) (U^m)^*`, the symbol of a linear map at an integer point.
pub fn symbol_of_operator(
    op: impl Fn(&TorusElement) -> TorusElement,
    theta: &std::sync::Arc<Theta>,
    m: &MultiIndex,
) -> Result<TorusElement> {
    let word = TorusElement::word(theta, m.clone());
    op(&word).try_mul(&word.star())
}

/// Matrix of `op` on the mode basis `{U^k : |k_j| <= box_radius}`: entry
/// `(p, k)` is the coefficient of `U^p` in `op(U^k)`. Output modes outside
/// the box are dropped.
pub fn operator_matrix(
    op: impl Fn(&TorusElement) -> TorusElement,
    theta: &std::sync::Arc<Theta>,
    box_radius: i64,
) -> (Vec<MultiIndex>, DMatrix<Complex64>) {
    let modes = box_modes(theta.dim(), box_radius);
    let index: HashMap<&MultiIndex, usize> = modes.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = DMatrix::zeros(modes.len(), modes.len());
    for (col, k) in modes.iter().enumerate() {
        let image = op(&TorusElement::word(theta, k.clone()));
        for (p, &c) in image.iter() {
            if let Some(&row) = index.get(p) {
                mat[(row, col)] = c;
            }
        }
    }
    (modes, mat)
}

/// Adjoint symbol at the integer point `m` read off the conjugate transpose
/// of the truncated operator matrix of `P_rho`.
///
/// Exact when `|m_j| + r <= box_radius`, where `r` bounds the mode support
/// of the symbol.
pub fn gns_adjoint_symbol(sym: &dyn Symbol, m: &MultiIndex, box_radius: i64) -> Result<TorusElement> {
    let theta = sym.theta();
    let (modes, mat) = operator_matrix(|a| apply(sym, a).expect("same theta"), theta, box_radius);
    let col = modes
        .iter()
        .position(|k| k == m)
        .ok_or_else(|| NctError::Precondition(format!("mode {m} lies outside the box {box_radius}")))?;
    // P^*(U^m) = sum_k conj(M[m, k]) U^k
    let image = TorusElement::from_pairs(
        theta,
        modes
            .iter()
            .enumerate()
            .map(|(k, mode)| (mode.clone(), mat[(col, k)].conj())),
    )?;
    image.try_mul(&TorusElement::word(theta, m.clone()).star())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{LambdaSymbol, PolynomialSymbol};
    use std::sync::Arc;

    #[test]
    fn lambda_scales_single_modes() {
        let t = Arc::new(Theta::two(0.31));
        let lam = LambdaSymbol::new(&t, 3.0);
        let m = MultiIndex::from([2, -1]);
        let out = apply(&lam, &TorusElement::word(&t, m.clone())).unwrap();
        let want = TorusElement::word(&t, m).scale_re(6f64.powf(1.5));
        assert!(out.distance0(&want) < 1e-12);
        assert!(apply(&lam, &TorusElement::zero(&t)).unwrap().is_zero());
    }

    #[test]
    fn linear_symbol_shifts_modes() {
        // rho(xi) = xi U_1: P(U_1^m) = m U_1^{m+1}
        let t = Arc::new(Theta::zero(1));
        let rho = PolynomialSymbol::new(&t, vec![(MultiIndex::from([1]), TorusElement::generator(&t, 0))]).unwrap();
        for m in -3..=3 {
            let out = apply(&rho, &TorusElement::word(&t, MultiIndex::from([m]))).unwrap();
            let want = TorusElement::monomial(&t, MultiIndex::from([m + 1]), Complex64::new(m as f64, 0.0));
            assert_eq!(out, want);
        }
    }

    #[test]
    fn symbols_of_simple_operators() {
        let t = Arc::new(Theta::two(0.23));
        let m = MultiIndex::from([1, 1]);
        let id = symbol_of_operator(|a| a.clone(), &t, &m).unwrap();
        assert!(id.distance0(&TorusElement::one(&t)) < 1e-15);
        let lam = LambdaSymbol::new(&t, 2.0);
        let s = symbol_of_operator(|a| apply(&lam, a).unwrap(), &t, &m).unwrap();
        assert!(s.distance0(&TorusElement::one(&t).scale_re(3.0)) < 1e-12);
        let b = &TorusElement::generator(&t, 0) + &TorusElement::generator(&t, 1).scale_re(0.5);
        let left = symbol_of_operator(|a| &b * a, &t, &m).unwrap();
        assert!(left.distance0(&b) < 1e-12);
    }

    #[test]
    fn mismatched_theta_is_rejected() {
        let lam = LambdaSymbol::new(&Arc::new(Theta::two(0.1)), 1.0);
        let a = TorusElement::one(&Arc::new(Theta::two(0.2)));
        assert!(matches!(apply(&lam, &a), Err(NctError::ThetaMismatch)));
    }
}
