use rand::Rng;

use super::{validate_weights, AliasTable};
use crate::error::{Error, Result};

/// Failed trials between checks for an all-zero target.
const DEAD_END_CHECK_INTERVAL: u64 = 4096;

/// Envelope for rejection sampling: an alias table over static weights `w` and
/// a constant `bound` with `target[i] <= bound * w[i]` for every index.
/// Targets are unnormalized and measured in the same units as `w`.
#[derive(Debug, Clone)]
pub struct RejectionProposal {
    table: AliasTable,
    weights: Vec<f64>,
    bound: f64,
}

impl RejectionProposal {
    pub fn new(proposal_weights: &[f64], bound: f64) -> Result<Self> {
        if !(bound > 0.0) || !bound.is_finite() {
            return Err(Error::Domain(format!("rejection bound {bound} must be positive")));
        }
        Ok(RejectionProposal {
            table: AliasTable::new(proposal_weights)?,
            weights: proposal_weights.to_vec(),
            bound,
        })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn memory_bytes(&self) -> usize {
        self.table.memory_bytes() + self.weights.len() * std::mem::size_of::<f64>()
    }

    #[inline]
    fn cap(&self, i: usize, target: f64) -> Result<f64> {
        let cap = self.bound * self.weights[i];
        if target > cap * (1.0 + 1e-12) {
            Err(Error::Domain(format!(
                "envelope violated at index {i}: target {target} exceeds {cap}"
            )))
        } else {
            Ok(cap)
        }
    }

    /// Draws from the target `target(i)`. Returns the index and the number of
    /// proposals used, or `Ok(None)` when the target is zero everywhere. The
    /// envelope is checked at every proposed index.
    pub fn sample_with<R, W>(&self, target: W, rng: &mut R) -> Result<Option<(usize, u64)>>
    where
        R: Rng + ?Sized,
        W: Fn(usize) -> f64,
    {
        let mut trials = 0u64;
        loop {
            let i = self.table.sample(rng);
            trials += 1;
            let t = target(i);
            let cap = self.cap(i, t)?;
            if t > 0.0 && rng.gen::<f64>() * cap < t {
                return Ok(Some((i, trials)));
            }
            if trials % DEAD_END_CHECK_INTERVAL == 0 && (0..self.len()).all(|j| target(j) <= 0.0) {
                return Ok(None);
            }
        }
    }
}

/// Rejection sampling of `target_weights`. Validates the whole envelope first,
/// then returns the drawn index and the number of proposals it took.
pub fn rejection_sample<R: Rng + ?Sized>(
    target_weights: &[f64],
    proposal: &RejectionProposal,
    rng: &mut R,
) -> Result<(usize, u64)> {
    if target_weights.len() != proposal.len() {
        return Err(Error::Domain(format!(
            "target has {} entries, proposal {}",
            target_weights.len(),
            proposal.len()
        )));
    }
    validate_weights(target_weights)?;
    for (i, &t) in target_weights.iter().enumerate() {
        proposal.cap(i, t)?;
    }
    proposal
        .sample_with(|i| target_weights[i], rng)?
        .ok_or_else(|| Error::Domain("target is zero everywhere".into()))
}
