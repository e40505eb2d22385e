//! Sobolev spaces `H^s` on finitely supported elements:
//! `||a||_s^2 = sum_m (1 + |m|^2)^s |a_m|^2`.

mod bounded;
mod embedding;
mod norms;
mod rellich;

pub use bounded::{boundedness_check, kernel_bound, schur_bound, BoundednessConfig, BoundednessOutcome};
pub use embedding::{
    ck_embedding_constant, default_cutoff, embedding_constant, embedding_parts, sobolev_thresholds, EmbeddingParts,
    SobolevThresholds, MIN_CUTOFF,
};
pub use norms::{ck_norm_bounds, norm_shift_check, sobolev_inner, sobolev_norm, weight};
pub use rellich::{rellich_extract, RellichOutcome};
pub(crate) use rellich::{extract, Coeffs};
