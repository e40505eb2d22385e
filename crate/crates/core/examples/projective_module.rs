//! A rank-one projection in M_2, vectors of its module and compressed matrix
//! symbols.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use nctorus::algebra::{MultiIndex, Theta, TorusElement};
use nctorus::module::{
    apply_matrix, idempotent_check, matrix_adjoint_expansion, matrix_adjoint_oracle, module_norm_s, project,
    scalar_idempotent_basis, MatrixElement, MatrixSymbol, ModuleVector,
};
use nctorus::symbols::{LambdaSymbol, PolynomialSymbol, SharedSymbol};

fn main() -> nctorus::Result<()> {
    let theta = Arc::new(Theta::two(0.2));
    let h = Complex64::new(0.5, 0.0);
    let e = MatrixElement::from_scalars(&theta, &DMatrix::from_row_slice(2, 2, &[h, h, h, h]))?;
    println!("idempotent: {}", idempotent_check(&e, 1e-12));
    println!("basis of the range: {} vector(s)", scalar_idempotent_basis(&e)?.len());

    let u = TorusElement::generator(&theta, 0);
    let entries: Vec<SharedSymbol> = vec![
        Arc::new(LambdaSymbol::new(&theta, 1.0)),
        Arc::new(PolynomialSymbol::new(&theta, vec![(MultiIndex::from([1, 0]), u.clone())])?),
        Arc::new(PolynomialSymbol::constant(u.star())),
        Arc::new(LambdaSymbol::new(&theta, 1.0)),
    ];
    let sym = MatrixSymbol::new(2, entries)?;
    let xi = [2.0, -1.0];
    let exact = matrix_adjoint_oracle(&sym, &xi)?;
    for n in 1..=3 {
        let r = matrix_adjoint_expansion(&sym, &xi, n)?;
        println!("adjoint expansion N = {n}: residual {:.2e}", r.value.max_distance0(&exact));
    }

    let compressed = sym.compressed(&e)?;
    let v = project(&ModuleVector::new(vec![u.clone(), TorusElement::one(&theta)])?, &e)?;
    let w = apply_matrix(&compressed, &v)?;
    println!("||v||_1 = {:.4}, ||P v||_0 = {:.4}", module_norm_s(&v, 1.0), module_norm_s(&w, 0.0));
    println!("distance of P v from the module: {:.2e}", project(&w, &e)?.max_distance0(&w));
    Ok(())
}
