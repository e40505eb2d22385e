//! Composite symbols: the expansion against double application.

use std::sync::Arc;

use nctorus::algebra::{MultiIndex, Theta, TorusElement};
use nctorus::pdo::{compose_expansion, compose_oracle, remainder_order_fit, ExpansionKind};
use nctorus::symbols::{LambdaSymbol, PolynomialSymbol};

fn main() -> nctorus::Result<()> {
    let theta = Arc::new(Theta::two(0.4));
    let u = TorusElement::generator(&theta, 0);
    let v = TorusElement::generator(&theta, 1);
    // phi = xi_1^2 V, rho = xi_2 U
    let phi = PolynomialSymbol::new(&theta, vec![(MultiIndex::from([2, 0]), v)])?;
    let rho = PolynomialSymbol::new(&theta, vec![(MultiIndex::from([0, 1]), u)])?;
    for m in [MultiIndex::from([0, 0]), MultiIndex::from([3, -1])] {
        let oracle = compose_oracle(&phi, &rho, &m)?;
        for n in 1..=3 {
            let r = compose_expansion(&phi, &rho, &m.as_f64(), n)?;
            println!("m = {m}, N = {n}: residual {:.2e}", r.value.distance0(&oracle));
        }
    }

    let t1 = Arc::new(Theta::zero(1));
    let a = LambdaSymbol::new(&t1, -1.0);
    let b = LambdaSymbol::with_coeff(-1.0, TorusElement::generator(&t1, 0));
    for n in 1..=3 {
        let fit = remainder_order_fit(ExpansionKind::Compose(&a, &b), n, &[4.0, 8.0, 16.0, 32.0])?;
        println!("lambda^-1 o lambda^-1 U_1, N = {n}: slope {:?}", fit.slope());
    }
    Ok(())
}
