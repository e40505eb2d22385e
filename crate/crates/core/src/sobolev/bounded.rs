use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::norms::sobolev_norm;
use crate::algebra::{box_modes, MultiIndex};
use crate::error::Result;
use crate::harness::{Check, VerificationReport};
use crate::pdo::apply;
use crate::random::{random_element, seeded};
use crate::symbols::{verify_order, Symbol, SymbolGrid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessConfig {
    pub trials: usize,
    /// Mode box radius of the random test elements.
    pub radius: i64,
    pub density: f64,
    pub seed: u64,
    /// Derivative orders measured for the symbol constant.
    pub max_i: usize,
    pub max_j: usize,
}

impl Default for BoundednessConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            radius: 3,
            density: 0.7,
            seed: 42,
            max_i: 2,
            max_j: 2,
        }
    }
}

/// Observed `||P a||_{s-d} / ||a||_s` against `sqrt(r k_rho)`, `k_rho = C_rho^2 2^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessOutcome {
    pub s: f64,
    pub order: f64,
    pub c_rho: f64,
    pub k_rho: f64,
    /// Rank factor, 1 for scalar symbols.
    pub r: usize,
    pub bound: f64,
    pub max_ratio: f64,
    pub trials: usize,
    /// Trials above `bound`.
    pub violations: usize,
    /// Schur bound valid for every element supported in the trial box.
    pub sound_bound: f64,
    pub sound_violations: usize,
}

impl BoundednessOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn report(&self, suite: &str, seed: u64) -> VerificationReport {
        let mut rep = VerificationReport::new(suite, seed);
        rep.set_param("s", self.s);
        rep.set_param("order", self.order);
        rep.set_param("trials", self.trials);
        rep.set_param("c_rho", self.c_rho);
        rep.set_param("k_rho", self.k_rho);
        rep.push(Check::at_most("max_ratio", self.max_ratio, self.bound));
        rep.push(Check::at_most("violations", self.violations as f64, 0.0));
        rep.push(Check::at_most("sound_max_ratio", self.max_ratio, self.sound_bound));
        rep
    }
}

/// `sqrt(r C^2 2^d)`.
pub fn kernel_bound(c_rho: f64, order: f64, r: usize) -> f64 {
    (r as f64 * c_rho * c_rho * 2f64.powf(order)).sqrt()
}

/// `sum_k 2^{|s-d|/2} (1+|k|^2)^{|s-d|/2} A_k` with
/// `A_k = max_{|m_j| <= box} |rho_k(m)| (1+|m|^2)^{-d/2}`.
///
/// Bounds `||P_rho a||_{s-d} / ||a||_s` for every `a` supported in the box,
/// by Peetre's inequality and Young's inequality on the mode lattice.
pub fn schur_bound(sym: &dyn Symbol, s: f64, box_radius: i64) -> f64 {
    let d = sym.order();
    let t = (s - d).abs();
    let mut a_k: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    for m in box_modes(sym.dim(), box_radius) {
        let w = (1.0 + m.norm_sq()).powf(-0.5 * d);
        for (k, c) in sym.eval(&m.as_f64()).iter() {
            let slot = a_k.entry(k.clone()).or_insert(0.0);
            *slot = slot.max(c.norm() * w);
        }
    }
    a_k.iter()
        .map(|(k, a)| 2f64.powf(0.5 * t) * (1.0 + k.norm_sq()).powf(0.5 * t) * a)
        .fold(0.0, |acc, x| acc + x)
}

/// Measures `C_rho` and tests `||P_rho a||_{s-d} <= sqrt(k_rho) ||a||_s` on random elements.
pub fn boundedness_check(sym: &dyn Symbol, s: f64, cfg: &BoundednessConfig) -> Result<BoundednessOutcome> {
    let grid = SymbolGrid::default_for(sym.dim(), cfg.seed);
    let c_rho = verify_order(sym, &grid, cfg.max_i, cfg.max_j)?.c_rho;
    let d = sym.order();
    let bound = kernel_bound(c_rho, d, 1);
    let mut rng = seeded(cfg.seed);
    let sound_bound = schur_bound(sym, s, cfg.radius);
    let mut max_ratio = 0.0_f64;
    let mut violations = 0;
    let mut sound_violations = 0;
    for _ in 0..cfg.trials {
        let a = random_element(sym.theta(), cfg.radius, cfg.density, &mut rng);
        let na = sobolev_norm(&a, s);
        if na == 0.0 {
            continue;
        }
        let ratio = sobolev_norm(&apply(sym, &a)?, s - d) / na;
        max_ratio = max_ratio.max(ratio);
        if ratio > bound * (1.0 + 1e-12) {
            violations += 1;
        }
        if ratio > sound_bound * (1.0 + 1e-12) {
            sound_violations += 1;
        }
    }
    Ok(BoundednessOutcome {
        s,
        order: d,
        c_rho,
        k_rho: c_rho * c_rho * 2f64.powf(d),
        r: 1,
        bound,
        max_ratio,
        trials: cfg.trials,
        violations,
        sound_bound,
        sound_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Theta, TorusElement};
    use crate::random::random_polynomial_symbol;
    use crate::symbols::{LambdaSymbol, PolynomialSymbol};
    use std::sync::Arc;

    #[test]
    fn lambda_ratio_is_one() {
        let t = Arc::new(Theta::two(0.3));
        for d in [0.0, 1.0, 2.0] {
            let lam = LambdaSymbol::new(&t, d);
            let out = boundedness_check(&lam, d, &BoundednessConfig::default()).unwrap();
            assert!((out.max_ratio - 1.0).abs() < 1e-12);
            assert!(out.passed());
            // without xi-derivatives the constant is exactly 1
            let cfg = BoundednessConfig {
                max_i: 0,
                max_j: 0,
                ..Default::default()
            };
            let out = boundedness_check(&lam, d, &cfg).unwrap();
            assert!((out.bound - 2f64.powf(d / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn schur_bound_holds_for_random_symbols() {
        let t = Arc::new(Theta::two(0.41));
        let mut rng = seeded(3);
        for d in 0..3 {
            let p = random_polynomial_symbol(&t, d, 1, &mut rng);
            for s in [0.0, 1.5, -1.0] {
                let out = boundedness_check(&p, s, &BoundednessConfig { trials: 30, ..Default::default() }).unwrap();
                assert_eq!(out.sound_violations, 0, "d={d} s={s}: {out:?}");
            }
        }
    }

    #[test]
    fn schur_bound_of_constant_is_l1_norm_at_s_zero() {
        let t = Arc::new(Theta::zero(1));
        let c = &TorusElement::one(&t) + &TorusElement::generator(&t, 0);
        let b = schur_bound(&PolynomialSymbol::constant(c.clone()), 0.0, 3);
        assert!((b - c.l1_norm()).abs() < 1e-14);
    }

    #[test]
    fn zero_symbol_ratio_zero() {
        let t = Arc::new(Theta::zero(1));
        let z = PolynomialSymbol::constant(TorusElement::zero(&t));
        let out = boundedness_check(&z, 0.0, &BoundednessConfig::default()).unwrap();
        assert_eq!(out.max_ratio, 0.0);
        assert!(out.sound_bound.is_sign_positive());
    }

    #[test]
    fn mode_shifted_lambda() {
        let t = Arc::new(Theta::zero(1));
        let sym = LambdaSymbol::with_coeff(1.0, TorusElement::generator(&t, 0));
        let out = boundedness_check(&sym, 1.0, &BoundednessConfig::default()).unwrap();
        assert!(out.max_ratio <= (2.0 * out.k_rho).sqrt());
    }

    #[test]
    fn coherent_elements_can_exceed_the_kernel_constant() {
        // rho = 1 + U_1 has C_rho = sqrt 2 for every (i, j), but left
        // multiplication by 1 + U_1 has norm 2 on long constant runs.
        let t = Arc::new(Theta::zero(1));
        let rho = PolynomialSymbol::constant(&TorusElement::one(&t) + &TorusElement::generator(&t, 0));
        let grid = SymbolGrid::default_for(1, 1);
        let c_rho = verify_order(&rho, &grid, 2, 2).unwrap().c_rho;
        assert!((c_rho - 2f64.sqrt()).abs() < 1e-12);
        let run = TorusElement::from_pairs(
            &t,
            (0..40).map(|k| (MultiIndex::from([k]), num_complex::Complex64::new(1.0, 0.0))),
        )
        .unwrap();
        let ratio = sobolev_norm(&apply(&rho, &run).unwrap(), 0.0) / sobolev_norm(&run, 0.0);
        assert!(ratio > kernel_bound(c_rho, 0.0, 1) * 1.3, "ratio {ratio}");
    }
}
