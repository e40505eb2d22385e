//! Adjoint symbols: the expansion against the exact twisted adjoint and the
//! truncated operator matrix, then remainder slopes.

use std::sync::Arc;

use nctorus::algebra::{MultiIndex, Theta, TorusElement};
use nctorus::pdo::{adjoint_expansion, adjoint_oracle, gns_adjoint_symbol, remainder_order_fit, ExpansionKind};
use nctorus::random::{random_polynomial_symbol, seeded};
use nctorus::symbols::LambdaSymbol;

fn main() -> nctorus::Result<()> {
    let theta = Arc::new(Theta::two(0.17));
    let p = random_polynomial_symbol(&theta, 2, 1, &mut seeded(3));
    println!("degree 2 symbol, expansion with N = 1..4 at integer points");
    for m in [MultiIndex::from([1, 0]), MultiIndex::from([-2, 3])] {
        let xi = m.as_f64();
        let oracle = adjoint_oracle(&p, &xi)?;
        let gns = gns_adjoint_symbol(&p, &m, m.sup_norm() + 2)?;
        let residuals: Vec<String> = (1..=4)
            .map(|n| Ok(format!("{:.1e}", adjoint_expansion(&p, &xi, n)?.value.distance0(&oracle))))
            .collect::<nctorus::Result<_>>()?;
        println!("  m = {m}: |oracle - matrix| = {:.1e}, residuals {}", oracle.distance0(&gns), residuals.join(" "));
    }

    let t1 = Arc::new(Theta::zero(1));
    let sym = LambdaSymbol::with_coeff(-2.0, TorusElement::generator(&t1, 0));
    println!("lambda^-2 U_1 remainder slopes over radii 4..32");
    for n in 1..=3 {
        let fit = remainder_order_fit(ExpansionKind::Adjoint(&sym), n, &[4.0, 8.0, 16.0, 32.0])?;
        println!("  N = {n}: slope {:?}, expected {}", fit.slope(), -2.0 - n as f64);
    }
    Ok(())
}
