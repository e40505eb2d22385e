use num_complex::Complex64;

use crate::algebra::{cstar_norm_bounds, indices_up_to, MultiIndex, NormBounds, TorusElement};
use crate::error::{NctError, Result};
use crate::pdo::apply;
use crate::stats::kahan_sum;
use crate::symbols::LambdaSymbol;

/// `(1 + |m|^2)^s`.
pub fn weight(m: &MultiIndex, s: f64) -> f64 {
    (1.0 + m.norm_sq()).powf(s)
}

/// `<a, b>_s = sum_m (1 + |m|^2)^s conj(b_m) a_m`.
pub fn sobolev_inner(a: &TorusElement, b: &TorusElement, s: f64) -> Result<Complex64> {
    if !a.same_theta(b) {
        return Err(NctError::ThetaMismatch);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, &x) in a.iter() {
        let y = b.coeff(m);
        if y != Complex64::new(0.0, 0.0) {
            acc += weight(m, s) * y.conj() * x;
        }
    }
    Ok(acc)
}

pub fn sobolev_norm(a: &TorusElement, s: f64) -> f64 {
    kahan_sum(a.iter().map(|(m, c)| weight(m, s) * c.norm_sqr())).sqrt()
}

/// `| ||a||_s - ||P_{lambda^t}(a)||_{s-t} |`.
pub fn norm_shift_check(a: &TorusElement, s: f64, t: f64) -> f64 {
    let lam = LambdaSymbol::new(a.theta(), t);
    let shifted = apply(&lam, a).expect("lambda shares the theta of a");
    (sobolev_norm(a, s) - sobolev_norm(&shifted, s - t)).abs()
}

/// `||a||_{inf,k} = sum_{|l| <= k} ||delta^l a||_{C*}` as summed bounds.
pub fn ck_norm_bounds(a: &TorusElement, k: usize, box_radius: i64) -> NormBounds {
    let mut total = NormBounds::zero(box_radius);
    for l in indices_up_to(a.dim(), k) {
        let d = a.delta(&l).expect("nonnegative order");
        total.accumulate(&cstar_norm_bounds(&d, box_radius));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Theta;
    use crate::random::{random_element, seeded};
    use std::sync::Arc;

    #[test]
    fn mode_norms() {
        let t = Arc::new(Theta::two(0.3));
        let m = MultiIndex::from([2, -1]);
        let u = TorusElement::word(&t, m);
        assert!((sobolev_norm(&u, 1.5).powi(2) - 6f64.powf(1.5)).abs() < 1e-12);
        let a = &TorusElement::generator(&t, 0) + &TorusElement::word(&t, MultiIndex::from([0, 2]));
        assert!((sobolev_norm(&a, 1.0).powi(2) - 7.0).abs() < 1e-13);
        let b = random_element(&t, 2, 0.8, &mut seeded(3));
        assert!((sobolev_norm(&b, 0.0).powi(2) - b.inner(&b).re).abs() < 1e-12);
    }

    #[test]
    fn inner_matches_weighted_operator_definition() {
        let t = Arc::new(Theta::two(0.3));
        let mut rng = seeded(8);
        let a = random_element(&t, 3, 0.6, &mut rng);
        let b = random_element(&t, 3, 0.6, &mut rng);
        let s = 1.3;
        let lam = LambdaSymbol::new(&t, s);
        let want = apply(&lam, &a).unwrap().inner(&apply(&lam, &b).unwrap());
        let got = sobolev_inner(&a, &b, s).unwrap();
        assert!((got - want).norm() < 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn norm_shift_cases() {
        let t = Arc::new(Theta::two(0.3));
        let a = random_element(&t, 3, 0.7, &mut seeded(2));
        assert_eq!(norm_shift_check(&a, 2.0, 0.0), 0.0);
        assert!(norm_shift_check(&a, 3.0, 1.5) <= 1e-10 * sobolev_norm(&a, 3.0));
        let u = TorusElement::word(&t, MultiIndex::from([3, 1]));
        assert!(norm_shift_check(&u, -1.0, 2.5) < 1e-12);
    }

    #[test]
    fn ck_bounds_examples() {
        let t1 = Arc::new(Theta::zero(1));
        let one = ck_norm_bounds(&TorusElement::one(&t1), 3, 2);
        assert_eq!((one.lower, one.upper), (1.0, 1.0));
        assert!((one.estimate - 1.0).abs() < 1e-12);
        let u = ck_norm_bounds(&TorusElement::generator(&t1, 0), 1, 3);
        for v in [u.lower, u.upper, u.estimate] {
            assert!((v - 2.0).abs() < 1e-12);
        }
        let t = Arc::new(Theta::two(0.3));
        let a = random_element(&t, 2, 0.7, &mut seeded(4));
        let b = ck_norm_bounds(&a, 2, 4);
        assert!(b.lower <= b.estimate * (1.0 + 1e-12) && b.estimate <= b.upper * (1.0 + 1e-12));
    }
}
