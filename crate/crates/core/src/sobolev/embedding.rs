use serde::{Deserialize, Serialize};

use crate::algebra::box_modes;
use crate::error::{NctError, Result};
use crate::stats::kahan_sum;

/// Smallest cutoff accepted for the truncated sum.
pub const MIN_CUTOFF: i64 = 10;

/// Default cutoff per dimension, keeping the box under about a million modes.
pub fn default_cutoff(n: usize) -> i64 {
    match n {
        1 => 4000,
        2 => 300,
        3 => 40,
        _ => 12,
    }
}

/// `C` with `C^2 = sum_{|m_j| <= L} (1+|m|^2)^{-s}` plus a tail bound, so that
/// `sum_m |a_m| <= C ||a||_s` for every `a`. Requires `2s > n`.
///
/// Lattice points with `max_j |m_j| = R` number at most `2n (2R+1)^{n-1}` and
/// satisfy `|m| >= R`, giving the tail bound
/// `2n 3^{n-1} L^{n-2s} / (2s - n)`.
pub fn embedding_constant(s: f64, n: usize, cutoff: i64) -> Result<f64> {
    Ok(embedding_parts(s, n, cutoff)?.constant())
}

/// Truncated sum and tail bound separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParts {
    pub truncated: f64,
    pub tail: f64,
}

impl EmbeddingParts {
    pub fn constant_sq(&self) -> f64 {
        self.truncated + self.tail
    }

    pub fn constant(&self) -> f64 {
        self.constant_sq().sqrt()
    }
}

pub fn embedding_parts(s: f64, n: usize, cutoff: i64) -> Result<EmbeddingParts> {
    if n == 0 {
        return Err(NctError::Precondition("dimension must be positive".into()));
    }
    if 2.0 * s <= n as f64 {
        return Err(NctError::Divergence(format!(
            "sum of (1+|m|^2)^-s diverges for 2s = {} <= n = {n}",
            2.0 * s
        )));
    }
    if cutoff < MIN_CUTOFF {
        return Err(NctError::Precondition(format!("cutoff must be at least {MIN_CUTOFF}")));
    }
    let truncated = kahan_sum(
        box_modes(n, cutoff)
            .iter()
            .map(|m| (1.0 + m.norm_sq()).powf(-s)),
    );
    let nf = n as f64;
    let tail = 2.0 * nf * 3f64.powf(nf - 1.0) * (cutoff as f64).powf(nf - 2.0 * s) / (2.0 * s - nf);
    Ok(EmbeddingParts { truncated, tail })
}

/// Regularity needed for the `C^k` embedding: the classical statement's
/// `k + 1` and the summability requirement `k + n/2` (strict).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevThresholds {
    pub stated: f64,
    pub sound: f64,
}

pub fn sobolev_thresholds(k: usize, n: usize) -> SobolevThresholds {
    SobolevThresholds {
        stated: k as f64 + 1.0,
        sound: k as f64 + n as f64 / 2.0,
    }
}

/// Constant `K` with `sum_{|l|<=k} sum_m |m^l| |a_m| <= K ||a||_s`, hence
/// `||a||_{inf,k} <= K ||a||_s`, via `|m^l| <= (1+|m|^2)^{|l|/2}`:
/// `K = sum_{|l|<=k} C(s - |l|)`. Requires `s > k + n/2`.
pub fn ck_embedding_constant(s: f64, k: usize, n: usize, cutoff: i64) -> Result<f64> {
    let th = sobolev_thresholds(k, n);
    if s <= th.sound {
        return Err(NctError::Divergence(format!(
            "C^{k} embedding needs s > k + n/2 = {}, got {s}",
            th.sound
        )));
    }
    let mut total = 0.0;
    for level in 0..=k {
        let count = crate::algebra::indices_of_total(n, level).len() as f64;
        total += count * embedding_constant(s - level as f64, n, cutoff)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_in_one_dimension() {
        // sum_m (1+m^2)^{-2} = (pi/2)(coth pi + pi / sinh^2 pi)
        let closed = PI / 2.0 * (1.0 / PI.tanh() + PI / PI.sinh().powi(2));
        let parts = embedding_parts(2.0, 1, default_cutoff(1)).unwrap();
        assert!(parts.truncated <= closed && closed <= parts.constant_sq());
        assert!((parts.constant_sq() - closed).abs() < 1e-9);
        assert!((closed - 1.6137).abs() < 1e-3);
    }

    #[test]
    fn large_s_tends_to_one() {
        let c = embedding_constant(40.0, 2, 12).unwrap();
        assert!((c * c - 1.0).abs() < 1e-10);
    }

    #[test]
    fn boundary_and_small_cutoff_rejected() {
        assert!(matches!(embedding_constant(1.0, 2, 50), Err(NctError::Divergence(_))));
        assert!(matches!(embedding_constant(2.0, 1, 3), Err(NctError::Precondition(_))));
    }

    #[test]
    fn thresholds_disagree_beyond_two_dimensions() {
        let th = sobolev_thresholds(1, 4);
        assert_eq!(th.stated, 2.0);
        assert_eq!(th.sound, 3.0);
        assert!(ck_embedding_constant(2.5, 1, 4, 12).is_err());
        assert!(ck_embedding_constant(3.5, 1, 2, 50).is_ok());
    }
}
