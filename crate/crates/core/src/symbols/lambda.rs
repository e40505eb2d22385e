use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{check_args, Symbol, SymbolKind};
use crate::algebra::{MultiIndex, Theta, TorusElement};
use crate::error::Result;

/// `rho(xi) = (1 + |xi|^2)^{s/2} c`, with `c = 1` for the plain weight `lambda^s`.
///
/// Derivatives are exact: `d^l (1+|xi|^2)^t` is tracked as a finite sum
/// `sum c_{alpha,k} xi^alpha (1+|xi|^2)^{t-k}` and differentiated with
/// `d_j (1+|xi|^2)^t = 2 t xi_j (1+|xi|^2)^{t-1}`.
#[derive(Debug, Clone)]
pub struct LambdaSymbol {
    s: f64,
    coeff: TorusElement,
}

/// Terms `(alpha, k) -> c` of `sum c xi^alpha (1+|xi|^2)^{t-k}`.
type WeightExpansion = BTreeMap<(MultiIndex, u32), f64>;

impl LambdaSymbol {
    pub fn new(theta: &Arc<Theta>, s: f64) -> Self {
        Self {
            s,
            coeff: TorusElement::one(theta),
        }
    }

    /// `lambda^s(xi) c`; noncentral when `c` has nonzero modes.
    pub fn with_coeff(s: f64, coeff: TorusElement) -> Self {
        Self { s, coeff }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn coeff(&self) -> &TorusElement {
        &self.coeff
    }

    /// `(d/dxi)^l (1+|xi|^2)^{s/2}` as a real number.
    pub fn weight_deriv(&self, l: &MultiIndex, xi: &[f64]) -> f64 {
        let t = self.s / 2.0;
        let q = 1.0 + xi.iter().map(|v| v * v).sum::<f64>();
        expansion(l, t)
            .into_iter()
            .map(|((alpha, k), c)| {
                let mono: f64 = xi
                    .iter()
                    .zip(alpha.iter())
                    .map(|(&x, &p)| x.powi(p as i32))
                    .product();
                c * mono * q.powf(t - k as f64)
            })
            .sum()
    }
}

fn expansion(l: &MultiIndex, t: f64) -> WeightExpansion {
    let n = l.len();
    let mut cur: WeightExpansion = BTreeMap::new();
    cur.insert((MultiIndex::zero(n), 0), 1.0);
    for (j, &times) in l.iter().enumerate() {
        for _ in 0..times {
            let mut next: WeightExpansion = BTreeMap::new();
            for ((alpha, k), c) in &cur {
                if alpha[j] > 0 {
                    let lowered = alpha.with(j, alpha[j] - 1);
                    *next.entry((lowered, *k)).or_default() += c * alpha[j] as f64;
                }
                let power = t - *k as f64;
                if power != 0.0 {
                    let raised = alpha.with(j, alpha[j] + 1);
                    *next.entry((raised, k + 1)).or_default() += c * 2.0 * power;
                }
            }
            next.retain(|_, c| *c != 0.0);
            cur = next;
        }
    }
    cur
}

impl Symbol for LambdaSymbol {
    fn theta(&self) -> &Arc<Theta> {
        self.coeff.theta()
    }

    fn order(&self) -> f64 {
        self.s
    }

    fn kind(&self) -> SymbolKind {
        SymbolKind::Lambda
    }

    fn eval(&self, xi: &[f64]) -> TorusElement {
        assert_eq!(xi.len(), self.dim(), "evaluation point has wrong dimension");
        let q = 1.0 + xi.iter().map(|v| v * v).sum::<f64>();
        self.coeff.scale(Complex64::new(q.powf(self.s / 2.0), 0.0))
    }

    fn deriv(&self, l: &MultiIndex, xi: &[f64]) -> Result<TorusElement> {
        check_args(self, l, xi)?;
        Ok(self.coeff.scale_re(self.weight_deriv(l, xi)))
    }

    fn modes(&self) -> Vec<MultiIndex> {
        self.coeff.support().cloned().collect()
    }

    fn polynomial_degree(&self) -> Option<usize> {
        // (1+|xi|^2)^t is a polynomial for nonnegative integer t
        let t = self.s / 2.0;
        (t >= 0.0 && t.fract() == 0.0).then(|| 2 * t as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_is_one() {
        let t = Arc::new(Theta::two(0.4));
        let l0 = LambdaSymbol::new(&t, 0.0);
        for xi in [[0.0, 0.0], [3.0, -7.0]] {
            assert_eq!(l0.eval(&xi), TorusElement::one(&t));
        }
        assert!(l0.deriv(&MultiIndex::from([1, 0]), &[2.0, 1.0]).unwrap().is_zero());
    }

    #[test]
    fn s_two_values_and_first_derivative() {
        let t = Arc::new(Theta::two(0.4));
        let l2 = LambdaSymbol::new(&t, 2.0);
        let one = TorusElement::one(&t);
        assert!(l2.eval(&[1.0, 1.0]).distance0(&one.scale_re(3.0)) < 1e-14);
        let d = l2.deriv(&MultiIndex::from([1, 0]), &[1.0, 1.0]).unwrap();
        assert!(d.distance0(&one.scale_re(2.0)) < 1e-14);
        // second derivative of 1 + xi_1^2 + xi_2^2 is the constant 2
        let d2 = l2.deriv(&MultiIndex::from([2, 0]), &[5.0, -3.0]).unwrap();
        assert!(d2.distance0(&one.scale_re(2.0)) < 1e-14);
        assert!(l2.deriv(&MultiIndex::from([3, 0]), &[5.0, -3.0]).unwrap().is_zero());
    }

    #[test]
    fn high_order_derivative_matches_closed_form() {
        // n = 1, t = -1: d^3 (1+x^2)^{-1} = -24 x (x^2 - 1) / (1+x^2)^4
        let t = Arc::new(Theta::zero(1));
        let lam = LambdaSymbol::new(&t, -2.0);
        for x in [0.3, 1.7, -4.0] {
            let got = lam.weight_deriv(&MultiIndex::from([3]), &[x]);
            let want = -24.0 * x * (x * x - 1.0) / (1.0 + x * x).powi(4);
            assert!((got - want).abs() < 1e-13 * (1.0 + want.abs()), "{got} vs {want}");
        }
    }

    #[test]
    fn polynomial_degree_for_even_integer_orders() {
        let t = Arc::new(Theta::zero(1));
        assert_eq!(LambdaSymbol::new(&t, 4.0).polynomial_degree(), Some(4));
        assert_eq!(LambdaSymbol::new(&t, 1.0).polynomial_degree(), None);
        assert_eq!(LambdaSymbol::new(&t, -2.0).polynomial_degree(), None);
    }
}
