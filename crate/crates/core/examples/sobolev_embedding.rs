//! Sobolev norms, the embedding constant and operator bounds.

use std::f64::consts::PI;
use std::sync::Arc;

use nctorus::algebra::{cstar_norm_bounds, Theta};
use nctorus::random::{random_element, random_polynomial_symbol, seeded};
use nctorus::sobolev::{boundedness_check, default_cutoff, embedding_constant, sobolev_norm, BoundednessConfig};
use nctorus::symbols::LambdaSymbol;

fn main() -> nctorus::Result<()> {
    let c = embedding_constant(2.0, 1, default_cutoff(1))?;
    let closed = 0.5 * PI * (1.0 / PI.tanh() + PI / PI.sinh().powi(2));
    println!("C(2,1)^2 = {:.8}, closed form {closed:.8}", c * c);

    let theta = Arc::new(Theta::two(0.23));
    let mut rng = seeded(9);
    let s = 1.5;
    let c = embedding_constant(s, 2, default_cutoff(2))?;
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let a = random_element(&theta, 3, 0.6, &mut rng);
        worst = worst.max(cstar_norm_bounds(&a, 3).estimate / sobolev_norm(&a, s));
    }
    println!("n = 2, s = {s}: C = {c:.4}, worst ||a|| / ||a||_s = {worst:.4}");

    let cfg = BoundednessConfig::default();
    let lam = boundedness_check(&LambdaSymbol::new(&theta, 1.0), s, &cfg)?;
    let poly = boundedness_check(&random_polynomial_symbol(&theta, 1, 1, &mut rng), s, &cfg)?;
    for (name, out) in [("lambda", lam), ("random degree 1", poly)] {
        println!(
            "{name}: max ratio {:.4}, sqrt(k_rho) {:.4} ({} above), Schur bound {:.4} ({} above)",
            out.max_ratio, out.bound, out.violations, out.sound_bound, out.sound_violations
        );
    }
    Ok(())
}
