//! Gauss-Legendre rules on intervals, single and composite.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// `(node, weight)` pairs of the `order`-point rule mapped to `[a, b]`.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order).expect("rule order must be positive"));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

/// `panels` equal subintervals of `[a, b]`, each with an `order`-point rule.
pub fn composite(order: usize, panels: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let base = gauss_legendre(order, -1.0, 1.0);
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(order * panels);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        out.extend(base.iter().map(|&(x, w)| (mid + 0.5 * width * x, 0.5 * width * w)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        // 5 points are exact through degree 9
        let q: f64 = gauss_legendre(5, 0.0, 2.0).iter().map(|(x, w)| w * x.powi(9)).sum();
        assert!((q - 2f64.powi(10) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn composite_rule_on_oscillatory_integrand() {
        let q: f64 = composite(16, 20, 0.0, 40.0).iter().map(|(x, w)| w * x.cos()).sum();
        assert!((q - 40f64.sin()).abs() < 1e-12);
    }
}
