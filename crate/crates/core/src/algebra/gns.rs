use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{box_modes, MultiIndex, TorusElement};

/// Two-sided bounds on a C* norm plus the truncated-GNS estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    /// `||a||_0`.
    pub lower: f64,
    /// `sum_m |a_m|`.
    pub upper: f64,
    /// Largest singular value of left multiplication on the truncated mode basis.
    pub estimate: f64,
    /// Mode box radius used for the estimate.
    pub box_radius: i64,
    /// Set when the box is smaller than the support radius of the element.
    pub truncated: bool,
}

impl NormBounds {
    pub fn zero(box_radius: i64) -> Self {
        Self {
            lower: 0.0,
            upper: 0.0,
            estimate: 0.0,
            box_radius,
            truncated: false,
        }
    }

    /// Componentwise sum, used for `C^k` norms.
    pub fn accumulate(&mut self, other: &NormBounds) {
        self.lower += other.lower;
        self.upper += other.upper;
        self.estimate += other.estimate;
        self.truncated |= other.truncated;
    }
}

/// Matrix of `x -> a x` on the basis `{U^k : |k_j| <= box_radius}`, rows and
/// columns in lexicographic mode order. Entry `(p, k)` is `a_{p-k} w(p-k, k)`.
pub fn gns_matrix(a: &TorusElement, box_radius: i64) -> DMatrix<Complex64> {
    let modes = box_modes(a.dim(), box_radius);
    let index: std::collections::HashMap<&MultiIndex, usize> =
        modes.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let theta = a.theta();
    let mut mat = DMatrix::zeros(modes.len(), modes.len());
    for (col, k) in modes.iter().enumerate() {
        for (m, &c) in a.iter() {
            let p = m + k;
            if let Some(&row) = index.get(&p) {
                mat[(row, col)] += c * theta.phase(m, k);
            }
        }
    }
    mat
}

/// Bounds `||a||_0 <= ||a||_{C*} <= sum |a_m|` together with the truncated
/// GNS estimate, which is nondecreasing in the box radius.
pub fn cstar_norm_bounds(a: &TorusElement, box_radius: i64) -> NormBounds {
    if a.is_zero() {
        return NormBounds::zero(box_radius);
    }
    let mat = gns_matrix(a, box_radius);
    let estimate = largest_singular_value(&mat);
    NormBounds {
        lower: a.norm0(),
        upper: a.l1_norm(),
        estimate,
        box_radius,
        truncated: box_radius < a.support_radius(),
    }
}

pub(crate) fn largest_singular_value(mat: &DMatrix<Complex64>) -> f64 {
    if mat.is_empty() {
        return 0.0;
    }
    mat.singular_values()
        .iter()
        .copied()
        .fold(0.0_f64, f64::max)
}
