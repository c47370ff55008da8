//! Edge samplers: the Metropolis-Hastings chain sampler plus the exact
//! baselines it is compared against (alias, direct, rejection).
//!
//! The lower-level entry points take a support size and a weight callback, so
//! the same code drives graph walks and the abstract distributions used by the
//! analysis module.

mod alias;
mod direct;
mod mh;
mod rejection;

pub use alias::AliasTable;
pub use direct::{direct_sample, direct_sample_with};
pub use mh::{mh_init, mh_sample, mh_transition, InitKind, InitStrategy, MhSampler};
pub use rejection::{rejection_sample, RejectionProposal};

use crate::error::{Error, Result};

pub(crate) fn validate_weights(weights: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Domain(format!("weight {i} is {w}")));
        }
        total += w;
    }
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::Domain("all weights are zero".into()))
    }
}
