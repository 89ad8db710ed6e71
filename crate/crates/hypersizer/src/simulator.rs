//! Cycle-level simulation of one multithreaded processing element hiding
//! memory latency, validating the balance postulate: throughput saturates
//! once thread contexts ≈ round-trip latency in cycles.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One simulation setup. `new` fills the measurement windows so steady
/// state dominates: 10·ℓ warm-up cycles, 100·(1+ℓ) measured cycles.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Hardware thread contexts per processing element (T).
    pub thread_contexts: u32,
    /// Mean round-trip memory latency in cycles (ℓ).
    pub round_trip_cycles: u32,
    /// Half-width of the uniform latency distribution as a fraction of ℓ
    /// (latencies drawn from [ℓ·(1−jitter), ℓ·(1+jitter)]). Must stay
    /// below 1 so latencies remain positive.
    pub latency_jitter: f64,
    /// Probability that an issued operation is a memory access and blocks
    /// its thread. 1.0 means every operation goes to memory; 0.0 means
    /// nothing ever blocks.
    pub memory_op_probability: f64,
    /// Cycles run before measurement starts.
    pub warmup_cycles: u64,
    /// Cycles measured after warm-up.
    pub measured_cycles: u64,
    /// Random seed; runs are bit-identical per seed.
    pub seed: u64,
}

impl SimConfig {
    pub fn new(thread_contexts: u32, round_trip_cycles: u32) -> Self {
        SimConfig {
            thread_contexts,
            round_trip_cycles,
            latency_jitter: 0.0,
            memory_op_probability: 1.0,
            warmup_cycles: 10 * round_trip_cycles as u64,
            measured_cycles: 100 * (1 + round_trip_cycles as u64),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thread_contexts < 1 {
            return Err(Error::invalid("thread_contexts", "must be >= 1"));
        }
        if self.round_trip_cycles < 1 {
            return Err(Error::invalid("round_trip_cycles", "must be >= 1"));
        }
        if self.measured_cycles < 1 {
            return Err(Error::invalid("measured_cycles", "must be >= 1"));
        }
        if !self.latency_jitter.is_finite()
            || self.latency_jitter < 0.0
            || self.latency_jitter >= 1.0
        {
            return Err(Error::invalid("latency_jitter", "must be in [0, 1)"));
        }
        if !self.memory_op_probability.is_finite()
            || self.memory_op_probability < 0.0
            || self.memory_op_probability > 1.0
        {
            return Err(Error::invalid("memory_op_probability", "must be in [0, 1]"));
        }
        Ok(())
    }
}

/// Outcome of one simulation run over the measured window.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Operations issued during the measured window.
    pub issued_ops: u64,
    /// issued_ops / measured_cycles.
    pub utilization: f64,
    /// Issued operations per thread context, indexed by thread.
    pub per_thread_issue: Vec<u64>,
}

// f64 has no Eq; SimResult only ever stores utilization derived from two
// integers, so bitwise comparison through PartialEq is well-defined.
impl Eq for SimResult {}

/// Runs one processing element for warm-up plus measured cycles.
///
/// Each cycle the scheduler picks the first ready thread at or after a
/// start offset that rotates one index per cycle (wrapping to the lowest
/// ready thread), so no context is starved. The chosen thread issues one
/// operation; memory operations block it for a sampled round-trip
/// latency, after which it becomes ready again. Cycles with no ready
/// thread are stalls.
pub fn run_simulation(sim: &SimConfig) -> Result<SimResult> {
    sim.validate()?;
    let contexts = sim.thread_contexts as u64;
    let mean = sim.round_trip_cycles as f64;
    let lat_lo = ((mean * (1.0 - sim.latency_jitter)).ceil() as u64).max(1);
    let lat_hi = ((mean * (1.0 + sim.latency_jitter)).floor() as u64).max(lat_lo);
    let sample_latency = lat_hi > lat_lo;
    let always_memory = sim.memory_op_probability >= 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);

    // Calendar wheel of wake-up times: a thread blocked at cycle c wakes
    // at c + latency + 1 ≤ c + lat_hi + 1, so lat_hi + 2 slots suffice.
    let wheel_len = (lat_hi + 2) as usize;
    let mut wheel: Vec<Vec<u32>> = vec![Vec::new(); wheel_len];
    let mut ready: BTreeSet<u32> = (0..sim.thread_contexts).collect();
    let mut per_thread_issue = vec![0u64; sim.thread_contexts as usize];
    let mut issued_ops = 0u64;

    let total_cycles = sim.warmup_cycles + sim.measured_cycles;
    for cycle in 0..total_cycles {
        let slot = (cycle % wheel_len as u64) as usize;
        for thread in wheel[slot].drain(..) {
            ready.insert(thread);
        }
        let offset = (cycle % contexts) as u32;
        let chosen = match ready.range(offset..).next() {
            Some(&thread) => thread,
            None => match ready.iter().next() {
                Some(&thread) => thread,
                None => continue, // stall: every context is blocked
            },
        };
        if cycle >= sim.warmup_cycles {
            issued_ops += 1;
            per_thread_issue[chosen as usize] += 1;
        }
        let is_memory = always_memory || rng.gen_bool(sim.memory_op_probability);
        if is_memory {
            ready.remove(&chosen);
            let latency = if sample_latency { rng.gen_range(lat_lo..=lat_hi) } else { lat_lo };
            let wake = ((cycle + latency + 1) % wheel_len as u64) as usize;
            wheel[wake].push(chosen);
        }
    }

    let utilization = issued_ops as f64 / sim.measured_cycles as f64;
    Ok(SimResult { issued_ops, utilization, per_thread_issue })
}

/// Runs `base` once per thread count and returns (T, utilization) pairs.
/// Point i runs with seed base.seed + i so curves are reproducible yet
/// decorrelated across points.
pub fn utilization_curve(base: &SimConfig, thread_range: &[u32]) -> Result<Vec<(u32, f64)>> {
    if thread_range.is_empty() {
        return Err(Error::invalid("thread_range", "must not be empty"));
    }
    if thread_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("thread_range", "must be strictly increasing"));
    }
    let mut curve = Vec::with_capacity(thread_range.len());
    for (index, &threads) in thread_range.iter().enumerate() {
        let mut point = base.clone();
        point.thread_contexts = threads;
        point.seed = base.seed.wrapping_add(index as u64);
        let result = run_simulation(&point)?;
        curve.push((threads, result.utilization));
    }
    Ok(curve)
}

/// The knee of a utilization curve: the smallest thread count whose
/// utilization reaches 95% of the curve's maximum.
pub fn find_knee(curve: &[(u32, f64)]) -> Result<u32> {
    let max = curve.iter().map(|&(_, u)| u).fold(f64::NAN, f64::max);
    if curve.is_empty() || !max.is_finite() {
        return Err(Error::invalid("curve", "must contain at least one finite point"));
    }
    let threshold = 0.95 * max;
    for &(threads, utilization) in curve {
        if utilization >= threshold {
            return Ok(threads);
        }
    }
    // Unreachable: the maximum itself satisfies the threshold.
    Err(Error::NonFinite { context: "find_knee".into() })
}
