use rand::Rng;

use super::validate_weights;
use crate::error::Result;

/// Inverse-CDF draw over unnormalized weights: one pass to sum, one to scan.
pub fn direct_sample<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize> {
    let total = validate_weights(weights)?;
    Ok(scan(weights.len(), |i| weights[i], total, rng))
}

/// Like [`direct_sample`] but evaluates weights through a callback, twice per
/// index, without allocating. Returns `None` when every weight is zero.
pub fn direct_sample_with<R, W>(len: usize, weight: W, rng: &mut R) -> Option<usize>
where
    R: Rng + ?Sized,
    W: Fn(usize) -> f64,
{
    let total: f64 = (0..len).map(&weight).sum();
    if total > 0.0 {
        Some(scan(len, weight, total, rng))
    } else {
        None
    }
}

#[inline]
fn scan<R, W>(len: usize, weight: W, total: f64, rng: &mut R) -> usize
where
    R: Rng + ?Sized,
    W: Fn(usize) -> f64,
{
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for i in 0..len {
        let w = weight(i);
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    // rounding can leave target just above the final partial sum
    last_positive
}
