use rand::Rng;

use super::validate_weights;
use crate::error::Result;

/// Walker's alias table (Vose's construction): O(n) build and memory, O(1) draws.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    /// Fails when a weight is negative or non-finite, or all weights are zero.
    pub fn new(weights: &[f64]) -> Result<AliasTable> {
        let total = validate_weights(weights)?;
        let n = weights.len();
        let mut scaled: Vec<f64> = weights.iter().map(|&w| w * n as f64 / total).collect();
        let mut prob = vec![1.0; n];
        let mut alias: Vec<u32> = (0..n as u32).collect();

        let (mut small, mut large): (Vec<usize>, Vec<usize>) =
            (0..n).partition(|&i| scaled[i] < 1.0);
        while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
            prob[s] = scaled[s];
            alias[s] = l as u32;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // leftovers in either list are 1 up to rounding
        Ok(AliasTable { prob, alias })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.gen_range(0..self.prob.len());
        if rng.gen::<f64>() < self.prob[i] {
            i
        } else {
            self.alias[i] as usize
        }
    }

    /// The distribution the table encodes, decoded from its columns.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.len() as f64;
        let mut p = vec![0.0; self.len()];
        for (i, (&keep, &other)) in self.prob.iter().zip(&self.alias).enumerate() {
            p[i] += keep / n;
            p[other as usize] += (1.0 - keep) / n;
        }
        p
    }

    /// Heap bytes held by the table.
    pub fn memory_bytes(&self) -> usize {
        self.prob.len() * std::mem::size_of::<f64>() + self.alias.len() * std::mem::size_of::<u32>()
    }
}
