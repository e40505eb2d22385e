//! Measured order constants for weights, polynomial symbols and a callback
//! symbol with finite-difference derivatives.

use std::sync::Arc;

use nctorus::algebra::{MultiIndex, Theta, TorusElement};
use nctorus::random::{random_polynomial_symbol, seeded};
use nctorus::symbols::{verify_order, CallbackSymbol, LambdaSymbol, PolynomialSymbol, SharedSymbol, SymbolGrid};

fn main() -> nctorus::Result<()> {
    let theta = Arc::new(Theta::two(0.31));
    let grid = SymbolGrid::default_for(2, 1);
    let mut rng = seeded(1);
    let u = TorusElement::generator(&theta, 0);

    let symbols: Vec<(&str, SharedSymbol)> = vec![
        ("lambda^2", Arc::new(LambdaSymbol::new(&theta, 2.0))),
        ("lambda^-1 U_1", Arc::new(LambdaSymbol::with_coeff(-1.0, u.clone()))),
        ("random degree 2", Arc::new(random_polynomial_symbol(&theta, 2, 1, &mut rng))),
        (
            "xi_1 declared order 0",
            Arc::new(PolynomialSymbol::new(&theta, vec![(MultiIndex::unit(2, 0), u.clone())])?.with_order(0.0)),
        ),
        (
            "callback xi_1 / <xi> U_1",
            Arc::new(CallbackSymbol::new(&theta, 0.0, vec![MultiIndex::unit(2, 0)], move |xi| {
                u.scale_re(xi[0] / (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).sqrt())
            })),
        ),
    ];
    println!("{:<24} {:>6} {:>12} {:>8}  diagnostics", "symbol", "order", "C_rho", "pass");
    for (name, sym) in symbols {
        let v = verify_order(sym.as_ref(), &grid, 2, 2)?;
        println!(
            "{name:<24} {:>6} {:>12.4e} {:>8}  {}",
            sym.order(),
            v.c_rho,
            v.pass,
            v.diagnostics.join("; ")
        );
    }
    Ok(())
}
