use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Symbol;
use crate::algebra::{box_modes, indices_up_to, MultiIndex};
use crate::error::Result;
use crate::harness::{Check, VerificationReport};
use crate::stats::least_squares_slope;

/// Radii of the ring sample points: one decade and a half of scale.
pub const DEFAULT_RADII: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

/// Largest tolerated log-log slope of the per-radius maximal ratio.
const TREND_SLOPE_MAX: f64 = 0.1;

/// Rings below this radius are left out of the trend fit.
const TREND_MIN_RADIUS: f64 = 4.0;

/// Sample points for symbol estimates: an integer tensor grid around the
/// origin plus rings of directions at fixed radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolGrid {
    pub points: Vec<Vec<f64>>,
    /// `(radius, indices into points)` for each ring.
    pub rings: Vec<(f64, Vec<usize>)>,
}

impl SymbolGrid {
    /// Integer tensor grid, axis and diagonal directions plus `random_dirs`
    /// seeded random unit vectors at each radius.
    pub fn new(n: usize, tensor_radius: i64, radii: &[f64], random_dirs: usize, seed: u64) -> Self {
        let mut points: Vec<Vec<f64>> = box_modes(n, tensor_radius)
            .iter()
            .map(MultiIndex::as_f64)
            .collect();
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for j in 0..n {
            for sign in [1.0, -1.0] {
                let mut d = vec![0.0; n];
                d[j] = sign;
                dirs.push(d);
            }
        }
        if n > 1 {
            let scale = 1.0 / (n as f64).sqrt();
            dirs.push(vec![scale; n]);
            dirs.push(vec![-scale; n]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random_dirs {
            let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            dirs.push(v.into_iter().map(|x| x / norm).collect());
        }
        let mut rings = Vec::new();
        for &r in radii {
            let start = points.len();
            points.extend(dirs.iter().map(|d| d.iter().map(|x| x * r).collect()));
            rings.push((r, (start..points.len()).collect()));
        }
        Self { points, rings }
    }

    /// Tensor radius 4 for `n <= 2`, 2 for `n = 3`, 1 beyond; default radii.
    pub fn default_for(n: usize, seed: u64) -> Self {
        let tensor = match n {
            0..=2 => 4,
            3 => 2,
            _ => 1,
        };
        Self::new(n, tensor, &DEFAULT_RADII, 8, seed)
    }
}

/// Constant measured for one pair `(i, j)` of derivative orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexConstant {
    pub i: MultiIndex,
    pub j: MultiIndex,
    pub constant: f64,
}

/// Result of measuring `sup ||delta^i d^j rho(xi)||_0 / (1+|xi|)^{d-|j|}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderVerification {
    pub order: f64,
    /// Maximum over all measured `(i, j)`.
    pub c_rho: f64,
    /// Log-log slope against `1 + R` of the per-ring maximal ratio, taken
    /// with the equivalent weight `(1+|xi|^2)^{(d-|j|)/2}` over rings with
    /// `R >= 4`.
    pub trend_slope: Option<f64>,
    pub per_index: Vec<IndexConstant>,
    pub pass: bool,
    pub diagnostics: Vec<String>,
}

impl OrderVerification {
    pub fn report(&self, suite: &str) -> VerificationReport {
        let mut report = VerificationReport::new(suite, 0);
        report.set_param("order", self.order);
        report.push(Check::at_most(
            "ratio_trend_slope",
            self.trend_slope.unwrap_or(f64::NEG_INFINITY),
            TREND_SLOPE_MAX,
        ));
        report.push(Check::finite("c_rho", self.c_rho));
        report
    }
}

/// Measures the symbol constant on `grid` for all `|i| <= max_i`, `|j| <= max_j`.
///
/// Passes when the constant is finite and the per-ring maximal ratio shows
/// no growth (log-log slope at most 0.1). The trend uses the weight
/// `(1+|xi|^2)^{1/2}` in place of `1+|xi|`: the two differ by at most a
/// factor `sqrt 2`, but the smooth one does not make bounded ratios creep up
/// toward their supremum.
pub fn verify_order(
    sym: &dyn Symbol,
    grid: &SymbolGrid,
    max_i: usize,
    max_j: usize,
) -> Result<OrderVerification> {
    let n = sym.dim();
    let d = sym.order();
    let is = indices_up_to(n, max_i);
    let js = indices_up_to(n, max_j);
    let mut per_index: Vec<IndexConstant> = Vec::new();
    for j in &js {
        for i in &is {
            per_index.push(IndexConstant {
                i: i.clone(),
                j: j.clone(),
                constant: 0.0,
            });
        }
    }
    let mut point_max = vec![0.0_f64; grid.points.len()];
    for (p, xi) in grid.points.iter().enumerate() {
        let q = xi.iter().map(|v| v * v).sum::<f64>();
        let r = 1.0 + q.sqrt();
        let bracket = (1.0 + q).sqrt();
        for (jn, j) in js.iter().enumerate() {
            let value = sym.deriv(j, xi)?;
            let exponent = d - j.total() as f64;
            let weight = r.powf(exponent);
            let smooth = bracket.powf(exponent);
            for (inn, i) in is.iter().enumerate() {
                let norm = value
                    .iter()
                    .map(|(m, c)| (c * m.pow(i)).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                let ratio = norm / weight;
                let slot = &mut per_index[jn * is.len() + inn];
                slot.constant = slot.constant.max(ratio);
                point_max[p] = point_max[p].max(norm / smooth);
            }
        }
    }
    let c_rho = per_index.iter().map(|c| c.constant).fold(0.0, f64::max);

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (radius, idx) in grid.rings.iter().filter(|(r, _)| *r >= TREND_MIN_RADIUS) {
        let m = idx.iter().map(|&k| point_max[k]).fold(0.0, f64::max);
        if m > 0.0 && m.is_finite() {
            xs.push((1.0 + radius).ln());
            ys.push(m.ln());
        }
    }
    let trend_slope = (xs.len() >= 2).then(|| least_squares_slope(&xs, &ys));

    let mut diagnostics = Vec::new();
    if !c_rho.is_finite() {
        diagnostics.push("symbol constant is not finite".to_string());
    }
    if let Some(s) = trend_slope {
        if s > TREND_SLOPE_MAX {
            diagnostics.push(format!(
                "ratio grows with |xi|: log-log slope {s:.3} exceeds {TREND_SLOPE_MAX}"
            ));
        }
    }
    Ok(OrderVerification {
        order: d,
        c_rho,
        trend_slope,
        per_index,
        pass: diagnostics.is_empty(),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Theta, TorusElement};
    use crate::symbols::{LambdaSymbol, PolynomialSymbol};
    use std::sync::Arc;

    #[test]
    fn lambda_constant_is_one_without_derivatives() {
        let t = Arc::new(Theta::two(0.3));
        let grid = SymbolGrid::default_for(2, 7);
        for d in [0.0, 1.0, 2.5] {
            let v = verify_order(&LambdaSymbol::new(&t, d), &grid, 0, 0).unwrap();
            // (1+|xi|^2)^{d/2} <= (1+|xi|)^d with equality at xi = 0
            assert!((v.c_rho - 1.0).abs() < 1e-14, "d={d}: {}", v.c_rho);
            assert!(v.pass);
        }
    }

    #[test]
    fn zero_symbol_passes_with_zero_constant() {
        let t = Arc::new(Theta::zero(1));
        let z = PolynomialSymbol::constant(TorusElement::zero(&t));
        let v = verify_order(&z, &SymbolGrid::default_for(1, 1), 2, 2).unwrap();
        assert_eq!(v.c_rho, 0.0);
        assert!(v.pass);
    }

    #[test]
    fn underdeclared_order_fails_with_growth() {
        let t = Arc::new(Theta::zero(1));
        let rho = PolynomialSymbol::new(&t, vec![(MultiIndex::from([1]), TorusElement::generator(&t, 0))])
            .unwrap()
            .with_order(0.0);
        let v = verify_order(&rho, &SymbolGrid::default_for(1, 1), 0, 0).unwrap();
        assert!(!v.pass);
        let slope = v.trend_slope.unwrap();
        assert!(slope > 0.8, "slope {slope}");
    }

    #[test]
    fn values_bounded_by_measured_constant() {
        let t = Arc::new(Theta::two(0.3));
        let u = TorusElement::generator(&t, 1);
        let rho = PolynomialSymbol::new(
            &t,
            vec![
                (MultiIndex::from([0, 0]), u.clone()),
                (MultiIndex::from([1, 1]), TorusElement::one(&t)),
            ],
        )
        .unwrap();
        let grid = SymbolGrid::default_for(2, 3);
        let v = verify_order(&rho, &grid, 1, 1).unwrap();
        assert!(v.pass);
        for xi in &grid.points {
            let r = 1.0 + xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(rho.eval(xi).norm0() <= v.c_rho * r.powf(2.0) * (1.0 + 1e-12));
        }
    }
}
