//! Extracting a close subsequence from a bounded sequence.

use std::sync::Arc;

use nctorus::algebra::{MultiIndex, Theta, TorusElement};
use nctorus::sobolev::{rellich_extract, sobolev_norm};

fn main() -> nctorus::Result<()> {
    let theta = Arc::new(Theta::two(0.3));
    // an oscillating low part plus a high mode escaping to infinity
    let seq: Vec<TorusElement> = (0..64)
        .map(|k| {
            let low = TorusElement::one(&theta).scale_re(if k % 2 == 0 { 0.5 } else { -0.5 });
            let m = MultiIndex::from([k as i64 + 1, 0]);
            let high = TorusElement::word(&theta, m.clone()).scale_re(0.5 / (1.0 + m.norm_sq()));
            &low + &high
        })
        .collect();
    let bound = seq.iter().map(|a| sobolev_norm(a, 2.0)).fold(0.0, f64::max);
    let out = rellich_extract(&seq, 2.0, 0.0, bound, 0.01)?;
    println!("C = {bound:.4}, box radius {}, tail bound {:.2e}", out.box_radius, out.tail_bound);
    println!("{} clusters, selected {:?}", out.clusters, out.indices);
    println!("max distance^2 {:.3e}, certified {}", out.max_distance_sq, out.certified);
    Ok(())
}
