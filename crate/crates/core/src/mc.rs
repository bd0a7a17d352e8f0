//! Reproducible, parallelizable Monte-Carlo trial runner shared by all
//! estimators.
//!
//! Every trial gets its own counter-based random stream derived from
//! (master seed, trial index), so the estimate is bit-identical no matter how
//! the trials are scheduled across workers. Trial values are collected into
//! their index slot and reduced in index order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// How many trials to run, under which master seed, and the scheduling
/// granularity for the parallel executor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub trials: usize,
    pub master_seed: u64,
    pub batch_size: usize,
}

impl TrialPlan {
    pub fn new(trials: usize, master_seed: u64) -> Self {
        Self { trials: trials.max(1), master_seed, batch_size: 1024 }
    }

    /// The dedicated random stream of trial `index`.
    pub fn stream(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// Monte-Carlo mean with its standard error and the trial count behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl CapacityEstimate {
    /// Standard error of the difference of two independent estimates.
    pub fn combined_se(&self, other: &CapacityEstimate) -> f64 {
        (self.std_error * self.std_error + other.std_error * other.std_error).sqrt()
    }
}

/// Runs `plan.trials` evaluations of `trial_fn`, each on its dedicated
/// stream, and returns mean ± standard error. The result does not depend on
/// the number of rayon workers.
pub fn run_estimate<F>(plan: &TrialPlan, trial_fn: F) -> CapacityEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let n = plan.trials.max(1);
    let mut values = vec![0.0f64; n];
    let batch = plan.batch_size.max(1);
    values
        .par_chunks_mut(batch)
        .enumerate()
        .for_each(|(chunk_idx, chunk)| {
            let base = chunk_idx * batch;
            for (offset, slot) in chunk.iter_mut().enumerate() {
                let mut rng = plan.stream(base + offset);
                *slot = trial_fn(&mut rng);
            }
        });
    summarize(&values)
}

/// Serial reference executor with the same stream derivation; used to pin the
/// order-independence contract.
pub fn run_estimate_serial<F>(plan: &TrialPlan, mut trial_fn: F) -> CapacityEstimate
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    let n = plan.trials.max(1);
    let mut values = vec![0.0f64; n];
    for (i, slot) in values.iter_mut().enumerate() {
        let mut rng = plan.stream(i);
        *slot = trial_fn(&mut rng);
    }
    summarize(&values)
}

fn summarize(values: &[f64]) -> CapacityEstimate {
    let n = values.len();
    // a degenerate (deterministic) trial function yields bit-identical
    // values; report it as exactly zero spread instead of summation noise
    if values.iter().all(|v| v.to_bits() == values[0].to_bits()) {
        return CapacityEstimate { mean: values[0], std_error: 0.0, trials: n };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    CapacityEstimate { mean, std_error: (var / n as f64).sqrt(), trials: n }
}
