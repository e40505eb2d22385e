use std::fmt;
use std::sync::Arc;

use super::{check_args, Symbol, SymbolKind};
use crate::algebra::{MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};

type EvalFn = dyn Fn(&[f64]) -> TorusElement + Send + Sync;
type DerivFn = dyn Fn(&MultiIndex, &[f64]) -> TorusElement + Send + Sync;

/// Finite-difference settings for callback symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    /// Base step relative to `1 + |xi|`.
    pub h_rel: f64,
    /// Largest `|l|` served by finite differences.
    pub max_order: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            h_rel: 1e-3,
            max_order: 4,
        }
    }
}

/// A symbol given by a closure. Derivatives come from an optional exact
/// closure, otherwise from central differences with one Richardson step
/// (`h` and `h/2`), accurate to `O(h^4)`.
#[derive(Clone)]
pub struct CallbackSymbol {
    theta: Arc<Theta>,
    order: f64,
    modes: Vec<MultiIndex>,
    f: Arc<EvalFn>,
    exact: Option<Arc<DerivFn>>,
    fd: FdConfig,
}

impl CallbackSymbol {
    /// `modes` must list every mode the closure can produce.
    pub fn new(
        theta: &Arc<Theta>,
        order: f64,
        modes: Vec<MultiIndex>,
        f: impl Fn(&[f64]) -> TorusElement + Send + Sync + 'static,
    ) -> Self {
        Self {
            theta: Arc::clone(theta),
            order,
            modes,
            f: Arc::new(f),
            exact: None,
            fd: FdConfig::default(),
        }
    }

    pub fn with_derivative(
        mut self,
        d: impl Fn(&MultiIndex, &[f64]) -> TorusElement + Send + Sync + 'static,
    ) -> Self {
        self.exact = Some(Arc::new(d));
        self
    }

    pub fn with_fd(mut self, fd: FdConfig) -> Self {
        self.fd = fd;
        self
    }

    /// Tensor central difference `prod_j Delta_{h}^{l_j}` divided by `h^{|l|}`.
    fn central(&self, l: &MultiIndex, xi: &[f64], h: f64) -> TorusElement {
        let n = xi.len();
        let mut out = TorusElement::zero(&self.theta);
        let mut counters = vec![0i64; n];
        loop {
            let mut weight = 1.0;
            let mut point = xi.to_vec();
            for j in 0..n {
                let (k, i) = (l[j], counters[j]);
                weight *= binomial(k, i) * if i % 2 == 0 { 1.0 } else { -1.0 };
                point[j] += (k as f64 / 2.0 - i as f64) * h;
            }
            out.add_scaled(&(self.f)(&point), weight.into());
            // odometer over 0..=l_j in each coordinate
            let mut j = 0;
            while j < n {
                counters[j] += 1;
                if counters[j] <= l[j] {
                    break;
                }
                counters[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
        out.scale_re(h.powi(-(l.total() as i32)))
    }
}

fn binomial(n: i64, k: i64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl fmt::Debug for CallbackSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CallbackSymbol")
            .field("order", &self.order)
            .field("modes", &self.modes)
            .field("exact_derivative", &self.exact.is_some())
            .field("fd", &self.fd)
            .finish()
    }
}

impl Symbol for CallbackSymbol {
    fn theta(&self) -> &Arc<Theta> {
        &self.theta
    }

    fn order(&self) -> f64 {
        self.order
    }

    fn kind(&self) -> SymbolKind {
        SymbolKind::Callback
    }

    fn eval(&self, xi: &[f64]) -> TorusElement {
        assert_eq!(xi.len(), self.dim(), "evaluation point has wrong dimension");
        (self.f)(xi)
    }

    fn deriv(&self, l: &MultiIndex, xi: &[f64]) -> Result<TorusElement> {
        check_args(self, l, xi)?;
        let order = l.total() as usize;
        if order == 0 {
            return Ok((self.f)(xi));
        }
        if let Some(d) = &self.exact {
            return Ok(d(l, xi));
        }
        if order > self.fd.max_order {
            return Err(NctError::UnsupportedOrder {
                order,
                max: self.fd.max_order,
            });
        }
        // Balance truncation O(h^4) against roundoff eps / h^{|l|}.
        let h_floor = f64::EPSILON.powf(1.0 / (order as f64 + 4.0));
        let radius = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = self.fd.h_rel.max(h_floor) * (1.0 + radius);
        let coarse = self.central(l, xi, h);
        let fine = self.central(l, xi, h / 2.0);
        Ok(&fine + &(&fine - &coarse).scale_re(1.0 / 3.0))
    }

    fn modes(&self) -> Vec<MultiIndex> {
        self.modes.clone()
    }
}
