//! Sampler audit on a loaded graph: for randomly reached walker states, compare
//! the empirical distribution of M-H draws against the normalized dynamic
//! weights of the model.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::empirical_kl;
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, NodeId};
use crate::models::{RandomWalkModel, WalkerState};
use crate::samplers::{direct_sample_with, InitStrategy, MhSampler};

/// Random steps taken from a start state before a state is audited.
const MAX_WARMUP_STEPS: usize = 3;
/// Attempts per requested state before giving up on finding more.
const ATTEMPTS_PER_STATE: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditConfig {
    pub states: usize,
    pub draws: usize,
    pub init: InitStrategy,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            states: 100,
            draws: 100_000,
            init: InitStrategy::Random,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateAudit {
    pub position: NodeId,
    pub affixture: u32,
    pub degree: usize,
    /// Draws that landed on a zero-weight neighbor.
    pub off_support: u64,
    pub kl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub states: Vec<StateAudit>,
}

impl AuditReport {
    pub fn max_kl(&self) -> f64 {
        self.states.iter().map(|s| s.kl).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "position,affixture,degree,off_support,kl")?;
        for s in &self.states {
            let affix = if s.affixture == crate::models::NONE {
                String::new()
            } else {
                s.affixture.to_string()
            };
            writeln!(
                out,
                "{},{},{},{},{}",
                s.position, affix, s.degree, s.off_support, s.kl
            )?;
        }
        writeln!(out, "max,,,,{}", self.max_kl())?;
        out.flush()
    }
}

/// A state reached by a short exact walk, with at least one positive weight.
fn random_state<M, R>(model: &M, rng: &mut R) -> Option<WalkerState>
where
    M: RandomWalkModel + ?Sized,
    R: Rng + ?Sized,
{
    let n = model.graph().node_count();
    if n == 0 {
        return None;
    }
    let mut state = model.initial_state(rng.gen_range(0..n) as NodeId)?;
    let steps = rng.gen_range(0..=MAX_WARMUP_STEPS);
    let mut taken = 0;
    while taken < steps || model.slot_affix(state).is_none() {
        let v = state.position;
        let degree = model.graph().degree(v);
        let i = direct_sample_with(degree, |i| model.calculate_weight(state, EdgeRef::new(v, i)), rng)?;
        state = model.update_state(state, EdgeRef::new(v, i));
        taken += 1;
    }
    let v = state.position;
    (0..model.graph().degree(v))
        .any(|i| model.calculate_weight(state, EdgeRef::new(v, i)) > 0.0)
        .then_some(state)
}

/// Audits `config.states` random states with `config.draws` M-H draws each.
pub fn audit_model<M: RandomWalkModel + ?Sized>(model: &M, config: &AuditConfig) -> Result<AuditReport> {
    if config.states == 0 || config.draws == 0 {
        return Err(Error::Config("states and draws must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut states = Vec::with_capacity(config.states);
    for _ in 0..config.states * ATTEMPTS_PER_STATE {
        if states.len() == config.states {
            break;
        }
        let Some(state) = random_state(model, &mut rng) else {
            continue;
        };
        let v = state.position;
        let degree = model.graph().degree(v);
        let weights: Vec<f64> = (0..degree)
            .map(|i| model.calculate_weight(state, EdgeRef::new(v, i)))
            .collect();
        let total: f64 = weights.iter().sum();
        let exact: Vec<f64> = weights.iter().map(|w| w / total).collect();

        let mut sampler = MhSampler::initialize(config.init, degree, |i| weights[i], &mut rng)
            .ok_or(Error::DeadEnd(v))?;
        let mut counts = vec![0u64; degree];
        for _ in 0..config.draws {
            sampler.step(degree, |i| weights[i], &mut rng);
            counts[sampler.last().unwrap()] += 1;
        }
        let off_support = counts
            .iter()
            .zip(&weights)
            .filter(|(_, w)| **w <= 0.0)
            .map(|(c, _)| *c)
            .sum();
        let kl = if off_support > 0 {
            f64::INFINITY
        } else {
            empirical_kl(&counts, &exact)?
        };
        states.push(StateAudit {
            position: v,
            affixture: state.affixture,
            degree,
            off_support,
            kl,
        });
    }
    if states.is_empty() {
        return Err(Error::Validation("no state with a positive weight was reached".into()));
    }
    Ok(AuditReport { states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::models::ModelParams;

    #[test]
    fn triangle_deepwalk_is_tight() {
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], true).unwrap();
        let m = ModelParams::deepwalk().bind(&g).unwrap();
        let report = audit_model(
            &m,
            &AuditConfig {
                states: 5,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.states.len(), 5);
        assert!(report.max_kl() < 1e-3, "{}", report.max_kl());
    }

    #[test]
    fn csv_has_max_row() {
        let report = AuditReport {
            states: vec![StateAudit {
                position: 1,
                affixture: 0,
                degree: 2,
                off_support: 0,
                kl: 0.5,
            }],
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with("max,,,,0.5\n"));
    }
}
