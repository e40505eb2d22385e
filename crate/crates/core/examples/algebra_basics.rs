//! Generators, the commutation relation, star, trace and norm bounds on the
//! two-dimensional torus.
//!
//! ```text
//! cargo run --example algebra_basics
//! ```

use std::sync::Arc;

use nctorus::algebra::{cstar_norm_bounds, MultiIndex, Theta, TorusElement};

fn main() -> nctorus::Result<()> {
    let theta = Arc::new(Theta::two(0.25));
    let u = TorusElement::generator(&theta, 0);
    let v = TorusElement::generator(&theta, 1);

    let vu = v.try_mul(&u)?;
    let uv = u.try_mul(&v)?;
    println!("U V = {:?}", uv.iter().collect::<Vec<_>>());
    println!("V U = {:?}", vu.iter().collect::<Vec<_>>());
    println!("V U (U V)^* = {}", vu.try_mul(&uv.star())?.trace());

    let a = &(&u + &v.scale_re(0.5)) + &TorusElement::one(&theta);
    let b = a.star().try_mul(&a)?;
    println!("tau(a^* a) = {:.6}, ||a||_0^2 = {:.6}", b.trace().re, a.norm0().powi(2));
    println!("delta_1(a) = {:?}", a.delta_j(0).iter().collect::<Vec<_>>());

    for radius in [1, 2, 4, 8] {
        let bounds = cstar_norm_bounds(&a, radius);
        println!(
            "box {radius}: {:.6} <= {:.6} <= {:.6}",
            bounds.lower, bounds.estimate, bounds.upper
        );
    }

    let w = TorusElement::word(&theta, MultiIndex::from([2, -1]));
    println!("U^(2,-1) times its adjoint: {:?}", w.try_mul(&w.star())?.iter().collect::<Vec<_>>());
    Ok(())
}
