use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;

use super::{check_args, Symbol, SymbolKind};
use crate::algebra::{MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};

/// `rho(xi) = sum_alpha xi^alpha c_alpha` with coefficients in the algebra.
///
/// Differential operators are exactly the polynomial symbols; derivatives in
/// `xi` are computed term by term.
#[derive(Debug, Clone)]
pub struct PolynomialSymbol {
    theta: Arc<Theta>,
    terms: BTreeMap<MultiIndex, TorusElement>,
    order: f64,
}

impl PolynomialSymbol {
    /// Collects `(exponent, coefficient)` terms; the order defaults to the
    /// total degree.
    pub fn new(theta: &Arc<Theta>, terms: Vec<(MultiIndex, TorusElement)>) -> Result<Self> {
        let mut map: BTreeMap<MultiIndex, TorusElement> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != theta.dim() {
                return Err(NctError::DimensionMismatch {
                    expected: theta.dim(),
                    found: exp.len(),
                });
            }
            if !exp.is_nonnegative() {
                return Err(NctError::Validation(format!(
                    "polynomial exponent {exp} has a negative entry"
                )));
            }
            if !coeff.same_theta(&TorusElement::zero(theta)) {
                return Err(NctError::ThetaMismatch);
            }
            let slot = map
                .entry(exp)
                .or_insert_with(|| TorusElement::zero(theta));
            *slot = slot.try_add(&coeff)?;
        }
        map.retain(|_, c| !c.is_zero());
        let degree = map.keys().map(|e| e.total()).max().unwrap_or(0);
        Ok(Self {
            theta: Arc::clone(theta),
            terms: map,
            order: degree as f64,
        })
    }

    /// `xi -> c`, a symbol of order zero.
    pub fn constant(c: TorusElement) -> Self {
        let theta = Arc::clone(c.theta());
        let n = theta.dim();
        Self::new(&theta, vec![(MultiIndex::zero(n), c)]).unwrap()
    }

    /// Overrides the declared order (for example to test order verification).
    pub fn with_order(mut self, order: f64) -> Self {
        self.order = order;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &TorusElement)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.total()).max().unwrap_or(0) as usize
    }
}

/// `prod_j alpha_j! / (alpha_j - l_j)!`, or `None` when some `l_j > alpha_j`.
fn falling(alpha: &MultiIndex, l: &MultiIndex) -> Option<f64> {
    let mut f = 1.0;
    for (&a, &d) in alpha.iter().zip(l.iter()) {
        if d > a {
            return None;
        }
        for v in (a - d + 1)..=a {
            f *= v as f64;
        }
    }
    Some(f)
}

fn monomial(xi: &[f64], e: &[i64]) -> f64 {
    xi.iter().zip(e).map(|(&x, &p)| x.powi(p as i32)).product()
}

impl Symbol for PolynomialSymbol {
    fn theta(&self) -> &Arc<Theta> {
        &self.theta
    }

    fn order(&self) -> f64 {
        self.order
    }

    fn kind(&self) -> SymbolKind {
        SymbolKind::Polynomial
    }

    fn eval(&self, xi: &[f64]) -> TorusElement {
        assert_eq!(xi.len(), self.dim(), "evaluation point has wrong dimension");
        let mut out = TorusElement::zero(&self.theta);
        for (exp, c) in &self.terms {
            out.add_scaled(c, Complex64::new(monomial(xi, exp), 0.0));
        }
        out
    }

    fn deriv(&self, l: &MultiIndex, xi: &[f64]) -> Result<TorusElement> {
        check_args(self, l, xi)?;
        let mut out = TorusElement::zero(&self.theta);
        for (exp, c) in &self.terms {
            if let Some(f) = falling(exp, l) {
                let rest = exp - l;
                out.add_scaled(c, Complex64::new(f * monomial(xi, &rest), 0.0));
            }
        }
        Ok(out)
    }

    fn modes(&self) -> Vec<MultiIndex> {
        let set: BTreeSet<MultiIndex> = self
            .terms
            .values()
            .flat_map(|c| c.support().cloned())
            .collect();
        set.into_iter().collect()
    }

    fn polynomial_degree(&self) -> Option<usize> {
        Some(self.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_symbol_values() {
        let t = Arc::new(Theta::zero(1));
        let u1 = TorusElement::generator(&t, 0);
        let rho = PolynomialSymbol::new(&t, vec![(MultiIndex::from([1]), u1.clone())]).unwrap();
        assert_eq!(rho.eval(&[2.0]), u1.scale_re(2.0));
        assert_eq!(rho.deriv(&MultiIndex::from([1]), &[2.0]).unwrap(), u1);
        assert!(rho.deriv(&MultiIndex::from([2]), &[2.0]).unwrap().is_zero());
        assert_eq!(rho.order(), 1.0);
        assert_eq!(rho.polynomial_degree(), Some(1));
    }

    #[test]
    fn mixed_derivative_of_cubic() {
        let t = Arc::new(Theta::two(0.2));
        let one = TorusElement::one(&t);
        // xi_1^2 xi_2
        let rho = PolynomialSymbol::new(&t, vec![(MultiIndex::from([2, 1]), one.clone())]).unwrap();
        let d = rho.deriv(&MultiIndex::from([1, 1]), &[3.0, -1.0]).unwrap();
        assert_eq!(d, one.scale_re(6.0));
        assert_eq!(rho.order(), 3.0);
    }

    #[test]
    fn merges_repeated_exponents_and_drops_zero_terms() {
        let t = Arc::new(Theta::zero(1));
        let u = TorusElement::generator(&t, 0);
        let rho = PolynomialSymbol::new(
            &t,
            vec![
                (MultiIndex::from([1]), u.clone()),
                (MultiIndex::from([1]), u.scale_re(-1.0)),
                (MultiIndex::from([0]), u.clone()),
            ],
        )
        .unwrap();
        assert_eq!(rho.degree(), 0);
        assert_eq!(rho.modes(), vec![MultiIndex::from([1])]);
    }

    #[test]
    fn rejects_negative_exponent() {
        let t = Arc::new(Theta::zero(1));
        let one = TorusElement::one(&t);
        assert!(PolynomialSymbol::new(&t, vec![(MultiIndex::from([-1]), one)]).is_err());
    }
}
