//! Seeded random elements, symbols and deformation matrices.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{box_modes, indices_up_to, MultiIndex, Theta, TorusElement, PRUNE_TOL};
use crate::symbols::PolynomialSymbol;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Skew-symmetric matrix with upper entries uniform in `[0, 1)`.
pub fn random_theta<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Theta {
    let upper: Vec<f64> = (0..n * n.saturating_sub(1) / 2).map(|_| rng.random::<f64>()).collect();
    Theta::from_upper(n, &upper).expect("upper triangle has the right length")
}

/// Complex-normal coefficients on `|m_j| <= radius`, each mode kept with
/// probability `density`, then zero-pruned.
pub fn random_element<R: Rng + ?Sized>(
    theta: &Arc<Theta>,
    radius: i64,
    density: f64,
    rng: &mut R,
) -> TorusElement {
    let pairs: Vec<(MultiIndex, Complex64)> = box_modes(theta.dim(), radius)
        .into_iter()
        .filter_map(|m| {
            let keep = rng.random::<f64>() < density;
            let c = complex_normal(rng);
            (keep && c.norm() > PRUNE_TOL).then_some((m, c))
        })
        .collect();
    TorusElement::from_pairs(theta, pairs).expect("modes have the theta dimension")
}

/// Polynomial symbol of total degree at most `degree` with random coefficients
/// supported on `|m_j| <= radius`.
pub fn random_polynomial_symbol<R: Rng + ?Sized>(
    theta: &Arc<Theta>,
    degree: usize,
    radius: i64,
    rng: &mut R,
) -> PolynomialSymbol {
    let terms = indices_up_to(theta.dim(), degree)
        .into_iter()
        .map(|e| (e, random_element(theta, radius, 0.6, rng)))
        .collect();
    PolynomialSymbol::new(theta, terms).expect("exponents are valid")
}
