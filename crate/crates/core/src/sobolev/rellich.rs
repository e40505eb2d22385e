use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::norms::{sobolev_norm, weight};
use crate::algebra::{MultiIndex, TorusElement};
use crate::error::{NctError, Result};

/// Coefficients keyed by `(component, mode)`; scalar elements use component 0.
pub(crate) type Coeffs = BTreeMap<(usize, MultiIndex), Complex64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RellichOutcome {
    /// Selected indices, increasing.
    pub indices: Vec<usize>,
    /// Low-frequency box `|m_j| <= box_radius` used for clustering.
    pub box_radius: i64,
    /// Bound on the squared `H^t` distance contributed outside the box.
    pub tail_bound: f64,
    pub cluster_radius: f64,
    pub clusters: usize,
    /// Largest squared `H^t` distance over selected pairs, by direct summation.
    pub max_distance_sq: f64,
    pub certified: bool,
    pub diagnostics: Vec<String>,
}

pub(crate) fn weighted_distance_sq(a: &Coeffs, b: &Coeffs, t: f64, keep: impl Fn(&MultiIndex) -> bool) -> f64 {
    let mut acc = 0.0;
    for (k, x) in a {
        if keep(&k.1) {
            let y = b.get(k).copied().unwrap_or_default();
            acc += weight(&k.1, t) * (x - y).norm_sqr();
        }
    }
    for (k, y) in b {
        if keep(&k.1) && !a.contains_key(k) {
            acc += weight(&k.1, t) * y.norm_sqr();
        }
    }
    acc
}

/// Greedy epsilon-net extraction shared by scalar and module sequences.
///
/// `norms_s` are the `H^s` norms of the items; `tail_factor * C^2 (1+R^2)^{t-s}`
/// bounds the squared tail of any pairwise difference.
pub(crate) fn extract(
    items: &[Coeffs],
    norms_s: &[f64],
    s: f64,
    t: f64,
    bound: f64,
    eps: f64,
    tail_factor: f64,
) -> Result<RellichOutcome> {
    if s <= t {
        return Err(NctError::Precondition(format!("need s > t, got s = {s}, t = {t}")));
    }
    if !(eps > 0.0) || !(bound >= 0.0) {
        return Err(NctError::Precondition("eps must be positive and C nonnegative".into()));
    }
    for (i, &nrm) in norms_s.iter().enumerate() {
        if nrm > bound * (1.0 + 1e-12) {
            return Err(NctError::Precondition(format!(
                "element {i} has H^{s} norm {nrm:.6e} above the bound {bound:.6e}"
            )));
        }
    }
    // smallest R with tail_factor C^2 (1+R^2)^{t-s} <= eps/2
    let c2 = tail_factor * bound * bound;
    let mut box_radius = 0i64;
    while c2 * (1.0 + (box_radius * box_radius) as f64).powf(t - s) > eps / 2.0 {
        box_radius += 1;
    }
    let tail_bound = c2 * (1.0 + (box_radius * box_radius) as f64).powf(t - s);
    let low = |m: &MultiIndex| m.sup_norm() <= box_radius;
    // members lie within rho of their center, so pairs are within 2 rho
    let cluster_radius = (eps / 2.0).sqrt() / 2.0;
    let mut centers: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let home = centers
            .iter()
            .position(|&c| weighted_distance_sq(item, &items[c], t, low).sqrt() <= cluster_radius);
        match home {
            Some(k) => members[k].push(i),
            None => {
                centers.push(i);
                members.push(vec![i]);
            }
        }
    }
    let mut best = 0;
    for (k, m) in members.iter().enumerate() {
        if m.len() > members[best].len() {
            best = k;
        }
    }
    let indices = members.get(best).cloned().unwrap_or_default();
    let mut max_distance_sq = 0.0_f64;
    for (x, &i) in indices.iter().enumerate() {
        for &j in &indices[x + 1..] {
            max_distance_sq = max_distance_sq.max(weighted_distance_sq(&items[i], &items[j], t, |_| true));
        }
    }
    let mut diagnostics = Vec::new();
    if indices.len() < 2 && !items.is_empty() {
        diagnostics.push(format!(
            "every cluster is a singleton ({} clusters for {} elements); the sequence is too short for a guaranteed pair",
            members.len(),
            items.len()
        ));
    }
    let certified = max_distance_sq <= eps;
    if !certified {
        diagnostics.push(format!("certificate failed: max distance^2 {max_distance_sq:.3e} > eps"));
    }
    Ok(RellichOutcome {
        indices,
        box_radius,
        tail_bound,
        cluster_radius,
        clusters: members.len(),
        max_distance_sq,
        certified,
        diagnostics,
    })
}

pub(crate) fn scalar_coeffs(a: &TorusElement) -> Coeffs {
    a.iter().map(|(m, c)| ((0, m.clone()), *c)).collect()
}

/// Extracts an `H^t`-close subsequence from an `H^s`-bounded sequence.
///
/// Pairwise differences have `H^s` norm at most `2C`, so outside the box
/// `|m_j| <= R` they contribute at most `4 C^2 (1+R^2)^{t-s}`; `R` is chosen
/// to make this at most `eps/2`, and the low parts are clustered greedily
/// with cluster radius `sqrt(eps/2)/2`. The largest cluster is returned
/// (ties to the earliest) and every pair is verified by direct summation.
pub fn rellich_extract(seq: &[TorusElement], s: f64, t: f64, bound: f64, eps: f64) -> Result<RellichOutcome> {
    if let Some(first) = seq.first() {
        if seq.iter().any(|a| !a.same_theta(first)) {
            return Err(NctError::ThetaMismatch);
        }
    }
    let items: Vec<Coeffs> = seq.iter().map(scalar_coeffs).collect();
    let norms: Vec<f64> = seq.iter().map(|a| sobolev_norm(a, s)).collect();
    extract(&items, &norms, s, t, bound, eps, 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Theta;
    use crate::random::{random_element, seeded};
    use std::sync::Arc;

    #[test]
    fn constant_sequence_is_fully_selected() {
        let t = Arc::new(Theta::two(0.3));
        let a = random_element(&t, 2, 0.8, &mut seeded(1));
        let c = sobolev_norm(&a, 2.0);
        let out = rellich_extract(&vec![a; 10], 2.0, 0.0, c, 0.01).unwrap();
        assert_eq!(out.indices, (0..10).collect::<Vec<_>>());
        assert_eq!(out.max_distance_sq, 0.0);
        assert!(out.certified);
    }

    #[test]
    fn escaping_modes_are_certified() {
        let t = Arc::new(Theta::two(0.3));
        let seq: Vec<TorusElement> = (0..40)
            .map(|k| {
                let m = MultiIndex::from([k, (k * 7) % 5 - 2]);
                let w = 1.0 / (1.0 + m.norm_sq());
                TorusElement::word(&t, m).scale_re(w)
            })
            .collect();
        let out = rellich_extract(&seq, 2.0, 0.0, 1.0, 0.01).unwrap();
        assert!(out.indices.len() >= 2);
        assert!(out.certified);
        for (x, &i) in out.indices.iter().enumerate() {
            for &j in &out.indices[x + 1..] {
                assert!(sobolev_norm(&(&seq[i] - &seq[j]), 0.0).powi(2) <= 0.01);
            }
        }
    }

    #[test]
    fn bound_violation_is_a_precondition_error() {
        let t = Arc::new(Theta::zero(1));
        let a = TorusElement::word(&t, MultiIndex::from([3]));
        assert!(matches!(
            rellich_extract(&[a], 2.0, 0.0, 1.0, 0.1),
            Err(NctError::Precondition(_))
        ));
    }

    #[test]
    fn short_distinct_sequence_gives_singleton_with_diagnostic() {
        let t = Arc::new(Theta::zero(1));
        let seq = vec![TorusElement::one(&t), TorusElement::one(&t).scale_re(-1.0)];
        let out = rellich_extract(&seq, 2.0, 0.0, 1.0, 0.01).unwrap();
        assert_eq!(out.indices, vec![0]);
        assert!(!out.diagnostics.is_empty());
    }
}
