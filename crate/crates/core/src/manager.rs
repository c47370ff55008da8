//! Sampler storage indexed by walker state.
//!
//! States are split into a *position* (the current node) and an *affixture*.
//! All samplers of one position form a contiguous bucket, so the slot of a
//! state is `bucket_offsets[position] + affixture`: a constant-time lookup with
//! no hashing regardless of how the model defines its states.
//!
//! Slots are shared between walker threads. A slot holds the last sample of
//! its M-H chain, or one of three sentinels. Initialization is claimed with a
//! compare-and-swap so it runs once; the last sample is a single atomic word,
//! so reads never tear. Two walkers accepting concurrently may overwrite each
//! other; whichever value survives is still an accepted sample of the chain.

use std::hint;
use std::sync::atomic::{AtomicU32, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, NodeId};
use crate::models::{RandomWalkModel, WalkerState};
use crate::samplers::{mh_transition, InitStrategy, MhSampler};

const UNINIT: u32 = u32::MAX;
const BUSY: u32 = u32::MAX - 1;
const DEAD: u32 = u32::MAX - 2;

/// Bucket offsets of the position/affixture layout for one bound model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotLayout {
    bucket_offsets: Vec<usize>,
}

impl SlotLayout {
    /// Fails with a resource error when the slot array of `slot_bytes`-sized
    /// entries could not be addressed.
    pub fn new<M: RandomWalkModel + ?Sized>(model: &M, slot_bytes: usize) -> Result<SlotLayout> {
        let n = model.graph().node_count();
        let mut bucket_offsets = Vec::with_capacity(n + 1);
        let mut total = 0usize;
        bucket_offsets.push(0);
        for v in 0..n as NodeId {
            total = total
                .checked_add(model.bucket_width(v))
                .ok_or_else(|| Error::Resource("sampler slot count overflows usize".into()))?;
            bucket_offsets.push(total);
        }
        match total.checked_mul(slot_bytes.max(1)) {
            Some(bytes) if bytes <= isize::MAX as usize => Ok(SlotLayout { bucket_offsets }),
            _ => Err(Error::Resource(format!(
                "{total} sampler slots exceed addressable memory"
            ))),
        }
    }

    pub fn total_slots(&self) -> usize {
        *self.bucket_offsets.last().unwrap()
    }

    pub fn bucket_offset(&self, v: NodeId) -> usize {
        self.bucket_offsets[v as usize]
    }

    pub fn bucket_width(&self, v: NodeId) -> usize {
        self.bucket_offsets[v as usize + 1] - self.bucket_offsets[v as usize]
    }

    /// Slot of `state`, or `None` for states the model leaves unmanaged.
    #[inline]
    pub fn slot_of<M: RandomWalkModel + ?Sized>(&self, model: &M, state: WalkerState) -> Option<usize> {
        model.slot_affix(state).map(|affix| {
            debug_assert!(affix < self.bucket_width(state.position));
            self.bucket_offsets[state.position as usize] + affix
        })
    }

    pub fn memory_bytes(&self) -> usize {
        self.bucket_offsets.len() * std::mem::size_of::<usize>()
    }
}

/// Lazily initialized M-H samplers, one per model state.
#[derive(Debug)]
pub struct SamplerManager {
    layout: SlotLayout,
    slots: Vec<AtomicU32>,
    initialized: AtomicUsize,
    init_nanos: AtomicU64,
}

impl SamplerManager {
    /// Allocates every slot uninitialized; no weights are evaluated.
    pub fn build<M: RandomWalkModel + ?Sized>(model: &M) -> Result<SamplerManager> {
        let layout = SlotLayout::new(model, std::mem::size_of::<AtomicU32>())?;
        let slots = (0..layout.total_slots()).map(|_| AtomicU32::new(UNINIT)).collect();
        Ok(SamplerManager {
            layout,
            slots,
            initialized: AtomicUsize::new(0),
            init_nanos: AtomicU64::new(0),
        })
    }

    pub fn layout(&self) -> &SlotLayout {
        &self.layout
    }

    pub fn total_slots(&self) -> usize {
        self.slots.len()
    }

    /// Slots whose initialization has run, dead ends included.
    pub fn initialized_slots(&self) -> usize {
        self.initialized.load(Ordering::Relaxed)
    }

    /// Time spent in sampler initialization, summed over threads.
    pub fn init_seconds(&self) -> f64 {
        self.init_nanos.load(Ordering::Relaxed) as f64 * 1e-9
    }

    pub fn memory_bytes(&self) -> usize {
        self.slots.len() * std::mem::size_of::<AtomicU32>() + self.layout.memory_bytes()
    }

    /// Snapshot of the sampler in `slot`.
    pub fn sampler_at(&self, slot: usize) -> MhSampler {
        match self.slots[slot].load(Ordering::Acquire) {
            v if v >= DEAD => MhSampler::UNINITIALIZED,
            v => MhSampler::from_last(v as usize),
        }
    }

    /// Returns the sampler for `state`, running `strategy` on first use.
    ///
    /// Panics if the model leaves `state` unmanaged (see
    /// [`RandomWalkModel::slot_affix`]).
    pub fn query_sampler<M, R>(
        &self,
        model: &M,
        state: WalkerState,
        strategy: InitStrategy,
        rng: &mut R,
    ) -> Result<SamplerHandle<'_>>
    where
        M: RandomWalkModel + ?Sized,
        R: Rng + ?Sized,
    {
        let index = self
            .layout
            .slot_of(model, state)
            .expect("query_sampler on an unmanaged state");
        let slot = &self.slots[index];
        let mut current = slot.load(Ordering::Acquire);
        loop {
            match current {
                DEAD => return Err(Error::DeadEnd(state.position)),
                BUSY => {
                    hint::spin_loop();
                    std::thread::yield_now();
                    current = slot.load(Ordering::Acquire);
                }
                UNINIT => {
                    match slot.compare_exchange(UNINIT, BUSY, Ordering::AcqRel, Ordering::Acquire) {
                        Ok(_) => {
                            let started = Instant::now();
                            let v = state.position;
                            let degree = model.graph().degree(v);
                            let init = MhSampler::initialize(
                                strategy,
                                degree,
                                |i| model.calculate_weight(state, EdgeRef::new(v, i)),
                                rng,
                            );
                            let value = init.and_then(|s| s.last()).map_or(DEAD, |i| i as u32);
                            slot.store(value, Ordering::Release);
                            self.initialized.fetch_add(1, Ordering::Relaxed);
                            self.init_nanos
                                .fetch_add(started.elapsed().as_nanos() as u64, Ordering::Relaxed);
                            current = value;
                        }
                        Err(actual) => current = actual,
                    }
                }
                _ => return Ok(SamplerHandle { slot, index }),
            }
        }
    }
}

/// Borrowed access to one initialized sampler slot.
#[derive(Debug, Clone, Copy)]
pub struct SamplerHandle<'a> {
    slot: &'a AtomicU32,
    index: usize,
}

impl SamplerHandle<'_> {
    pub fn slot_index(&self) -> usize {
        self.index
    }

    pub fn last(&self) -> usize {
        self.slot.load(Ordering::Relaxed) as usize
    }

    /// One M-H transition for `state`; returns the sampled edge and whether the
    /// proposal was accepted.
    #[inline]
    pub fn sample<M, R>(&self, model: &M, state: WalkerState, rng: &mut R) -> (EdgeRef, bool)
    where
        M: RandomWalkModel + ?Sized,
        R: Rng + ?Sized,
    {
        let v = state.position;
        let degree = model.graph().degree(v);
        let last = self.slot.load(Ordering::Relaxed) as usize;
        let (next, accepted) = mh_transition(
            last,
            degree,
            |i| model.calculate_weight(state, EdgeRef::new(v, i)),
            rng,
        );
        if next != last {
            self.slot.store(next as u32, Ordering::Relaxed);
        }
        (EdgeRef::new(v, next), accepted)
    }
}
