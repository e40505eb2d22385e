use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expansion::{adjoint_expansion, adjoint_oracle, compose_expansion, compose_oracle};
use crate::algebra::{indices_of_total, indices_up_to, MultiIndex, TorusElement};
use crate::error::{NctError, Result};
use crate::quadrature::gauss_legendre;
use crate::stats::least_squares_slope;
use crate::symbols::{check_args, Symbol};

const TAYLOR_NODES: usize = 32;
const TAYLOR_CHECK_NODES: usize = 48;
const TAYLOR_AGREEMENT: f64 = 1e-8;

/// Residuals below this at every radius mean the expansion is exact.
pub const EXACT_RESIDUAL: f64 = 1e-13;

fn y_power(y: &[f64], l: &MultiIndex) -> f64 {
    y.iter().zip(l.iter()).map(|(&v, &p)| v.powi(p as i32)).product()
}

fn remainder_with(
    phi: &dyn Symbol,
    l: &MultiIndex,
    xi: &[f64],
    y: &[f64],
    nodes: usize,
) -> Result<TorusElement> {
    let order = l.total() as i32;
    let mut acc = TorusElement::zero(phi.theta());
    for (g, w) in gauss_legendre(nodes, 0.0, 1.0) {
        let point: Vec<f64> = xi.iter().zip(y).map(|(a, b)| a + g * b).collect();
        let weight = w * (1.0 - g).powi(order - 1);
        acc.add_scaled(&phi.deriv(l, &point)?, Complex64::new(weight, 0.0));
    }
    Ok(acc.scale_re(order as f64 * y_power(y, l) / l.factorial()))
}

/// Integral Taylor remainder term
/// `N (y^l / l!) int_0^1 (1 - g)^{N-1} d^l phi(xi + g y) dg` for `|l| = N >= 1`,
/// by 32-point Gauss-Legendre, cross-checked against 48 points.
pub fn taylor_remainder(phi: &dyn Symbol, l: &MultiIndex, xi: &[f64], y: &[f64]) -> Result<TorusElement> {
    check_args(phi, l, xi)?;
    if y.len() != xi.len() {
        return Err(NctError::DimensionMismatch {
            expected: xi.len(),
            found: y.len(),
        });
    }
    if l.total() < 1 {
        return Err(NctError::Precondition("remainder needs |l| >= 1".into()));
    }
    let value = remainder_with(phi, l, xi, y, TAYLOR_NODES)?;
    let check = remainder_with(phi, l, xi, y, TAYLOR_CHECK_NODES)?;
    let discrepancy = value.distance0(&check);
    if discrepancy > TAYLOR_AGREEMENT * value.norm0().max(1.0) {
        return Err(NctError::QuadratureNonconvergence { discrepancy });
    }
    Ok(value)
}

/// `||phi(xi + y) - sum_{|l|<N} (y^l/l!) d^l phi(xi) - sum_{|l|=N} R_l||_0`.
pub fn taylor_identity_residual(phi: &dyn Symbol, order: usize, xi: &[f64], y: &[f64]) -> Result<f64> {
    let n = phi.dim();
    let target: Vec<f64> = xi.iter().zip(y).map(|(a, b)| a + b).collect();
    let mut sum = TorusElement::zero(phi.theta());
    if order > 0 {
        for l in indices_up_to(n, order - 1) {
            let c = y_power(y, &l) / l.factorial();
            sum.add_scaled(&phi.deriv(&l, xi)?, Complex64::new(c, 0.0));
        }
    }
    for l in indices_of_total(n, order) {
        if order == 0 {
            break;
        }
        sum.add_scaled(&taylor_remainder(phi, &l, xi, y)?, Complex64::ONE);
    }
    if order == 0 {
        sum = phi.eval(xi);
    }
    Ok(phi.eval(&target).distance0(&sum))
}

/// Which expansion to measure against its oracle.
#[derive(Debug, Clone, Copy)]
pub enum ExpansionKind<'a> {
    Adjoint(&'a dyn Symbol),
    Compose(&'a dyn Symbol, &'a dyn Symbol),
}

impl ExpansionKind<'_> {
    fn dim(&self) -> usize {
        match self {
            ExpansionKind::Adjoint(s) | ExpansionKind::Compose(s, _) => s.dim(),
        }
    }

    /// `M - N` or `M_1 + M_2 - N`.
    pub fn expected_slope(&self, n_terms: usize) -> f64 {
        match self {
            ExpansionKind::Adjoint(s) => s.order() - n_terms as f64,
            ExpansionKind::Compose(a, b) => a.order() + b.order() - n_terms as f64,
        }
    }

    /// `||expansion - oracle||_0` at an integer point.
    pub fn residual(&self, m: &MultiIndex, n_terms: usize) -> Result<f64> {
        let xi = m.as_f64();
        Ok(match self {
            ExpansionKind::Adjoint(s) => adjoint_expansion(*s, &xi, n_terms)?
                .value
                .distance0(&adjoint_oracle(*s, &xi)?),
            ExpansionKind::Compose(a, b) => compose_expansion(*a, *b, &xi, n_terms)?
                .value
                .distance0(&compose_oracle(*a, *b, m)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum RemainderFit {
    /// Every residual fell below the exactness threshold.
    Exact { max_residual: f64 },
    Slope {
        slope: f64,
        expected: f64,
        /// `(radius, max residual at that radius)`.
        samples: Vec<(f64, f64)>,
    },
}

impl RemainderFit {
    /// Exact results satisfy every order bound.
    pub fn within(&self, tolerance: f64) -> bool {
        match self {
            RemainderFit::Exact { .. } => true,
            RemainderFit::Slope { slope, expected, .. } => *slope <= expected + tolerance,
        }
    }

    pub fn slope(&self) -> Option<f64> {
        match self {
            RemainderFit::Exact { .. } => None,
            RemainderFit::Slope { slope, .. } => Some(*slope),
        }
    }
}

/// Integer sample points at radius `r`: `+-r e_j` and, for `n > 1`, the
/// diagonal points with sup norm `r`.
fn ring_points(n: usize, r: i64) -> Vec<MultiIndex> {
    let mut pts = Vec::new();
    for j in 0..n {
        for sign in [1, -1] {
            pts.push(MultiIndex::zero(n).with(j, sign * r));
        }
    }
    if n > 1 {
        pts.push(MultiIndex::from(vec![r; n]));
        pts.push(MultiIndex::from(vec![-r; n]));
    }
    pts
}

/// Least-squares slope of `log` max residual against `log(1 + R)` over
/// integer points at the given radii.
pub fn remainder_order_fit(kind: ExpansionKind<'_>, n_terms: usize, radii: &[f64]) -> Result<RemainderFit> {
    if radii.len() < 4 {
        return Err(NctError::Precondition("remainder fit needs at least 4 radii".into()));
    }
    let lo = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().cloned().fold(0.0, f64::max);
    if lo < 1.0 || hi / lo < 8.0 {
        return Err(NctError::Precondition(
            "radii must be at least 1 and span a factor of 8".into(),
        ));
    }
    let n = kind.dim();
    let mut samples = Vec::with_capacity(radii.len());
    for &r in radii {
        let ri = r.round() as i64;
        let mut worst = 0.0_f64;
        for m in ring_points(n, ri) {
            worst = worst.max(kind.residual(&m, n_terms)?);
        }
        samples.push((ri as f64, worst));
    }
    let max_residual = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    if max_residual < EXACT_RESIDUAL {
        return Ok(RemainderFit::Exact { max_residual });
    }
    let xs: Vec<f64> = samples.iter().map(|s| (1.0 + s.0).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(RemainderFit::Slope {
        slope: least_squares_slope(&xs, &ys),
        expected: kind.expected_slope(n_terms),
        samples,
    })
}
