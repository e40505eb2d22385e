use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{idempotent_check, MatrixElement};
use super::vector::ModuleVector;
use crate::algebra::TorusElement;
use crate::error::{NctError, Result};
use crate::io::read_json;

const EIGEN_TOL: f64 = 1e-9;

/// Orthonormal vectors `f_j` spanning the range of a self-adjoint idempotent
/// whose entries are complex multiples of `1`.
pub fn scalar_idempotent_basis(e: &MatrixElement) -> Result<Vec<ModuleVector>> {
    let scalars = e
        .scalar_part()
        .ok_or_else(|| NctError::Validation("idempotent entries must be scalar multiples of 1".into()))?;
    if !idempotent_check(e, EIGEN_TOL) {
        return Err(NctError::Validation("matrix is not a self-adjoint idempotent".into()));
    }
    let herm: DMatrix<Complex64> = (&scalars + scalars.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut basis = Vec::new();
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if (lambda - 1.0).abs() < 1e-6 {
            let col = eig.eigenvectors.column(idx);
            let entries = col.iter().map(|&c| TorusElement::scalar(e.theta(), c)).collect();
            basis.push(ModuleVector::new(entries)?);
        }
    }
    Ok(basis)
}

/// Reads an idempotent from JSON and checks `e^2 = e = e^*` to `tol`.
pub fn load_idempotent(path: &std::path::Path, tol: f64) -> Result<MatrixElement> {
    let e: MatrixElement = read_json(path)?;
    if !idempotent_check(&e, tol) {
        return Err(NctError::Validation(format!(
            "{}: not a self-adjoint idempotent at tolerance {tol:e}",
            path.display()
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Theta;
    use crate::module::{module_inner, project};
    use std::sync::Arc;

    #[test]
    fn rank_one_projection_basis() {
        let t = Arc::new(Theta::two(0.3));
        // projection onto (1, i)/sqrt 2
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, -0.5),
                Complex64::new(0.0, 0.5),
                Complex64::new(0.5, 0.0),
            ],
        );
        let e = MatrixElement::from_scalars(&t, &m).unwrap();
        let basis = scalar_idempotent_basis(&e).unwrap();
        assert_eq!(basis.len(), 1);
        let f = &basis[0];
        assert!((module_inner(f, f).unwrap().re - 1.0).abs() < 1e-12);
        assert!(project(f, &e).unwrap().max_distance0(f) < 1e-12);
    }

    #[test]
    fn non_scalar_or_non_idempotent_rejected() {
        let t = Arc::new(Theta::two(0.3));
        let e = MatrixElement::diag(vec![TorusElement::generator(&t, 0), TorusElement::one(&t)]).unwrap();
        assert!(scalar_idempotent_basis(&e).is_err());
        let twice = MatrixElement::identity(&t, 2).scale(Complex64::new(2.0, 0.0));
        assert!(scalar_idempotent_basis(&twice).is_err());
    }

    #[test]
    fn load_validates() {
        let t = Arc::new(Theta::zero(1));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("e.json");
        crate::io::write_json(&p, &MatrixElement::identity(&t, 2).scale(Complex64::new(3.0, 0.0))).unwrap();
        assert!(matches!(load_idempotent(&p, 1e-10), Err(NctError::Validation(_))));
        crate::io::write_json(&p, &MatrixElement::identity(&t, 2)).unwrap();
        assert!(load_idempotent(&p, 1e-10).is_ok());
    }
}
