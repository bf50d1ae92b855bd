//! Seeded random workloads.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded with `seed_from_u64(seed)`
//! and switched to stream `n` for a sweep entry of size `n`, so every size gets
//! an independent, reproducible sequence. Box endpoints are two independent
//! uniform draws per dimension, sorted; constants are uniform integers from
//! the configured inclusive range.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptOp {
    Update(Vec<RangeInclusive<usize>>, i64),
    Query(Vec<RangeInclusive<usize>>),
}

#[derive(Debug, Clone)]
pub struct Workload {
    rng: ChaCha8Rng,
}

impl Workload {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Workload { rng }
    }

    pub fn random_box(&mut self, dims: &[usize]) -> Vec<RangeInclusive<usize>> {
        dims.iter()
            .map(|&n| {
                let a = self.rng.random_range(0..n);
                let b = self.rng.random_range(0..n);
                a.min(b)..=a.max(b)
            })
            .collect()
    }

    pub fn random_value(&mut self, range: (i64, i64)) -> i64 {
        self.rng.random_range(range.0..=range.1)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    /// `ops` operations, each an update or a query with equal probability.
    pub fn mixed_script(
        &mut self,
        dims: &[usize],
        ops: usize,
        values: (i64, i64),
    ) -> Vec<ScriptOp> {
        (0..ops)
            .map(|_| {
                if self.coin() {
                    let b = self.random_box(dims);
                    ScriptOp::Update(b, self.random_value(values))
                } else {
                    ScriptOp::Query(self.random_box(dims))
                }
            })
            .collect()
    }
}

/// Convenience wrapper: the mixed script for `dims` under `seed`.
pub fn mixed_script(dims: &[usize], ops: usize, seed: u64, values: (i64, i64)) -> Vec<ScriptOp> {
    Workload::new(seed, dims[0] as u64).mixed_script(dims, ops, values)
}
