//! Discrete-event simulation of cache-line fills through one or two
//! sub-channel command queues.
//!
//! Model assumptions:
//! - every request is one 64-byte cache-line fill arriving by a Poisson process;
//! - each sub-channel is a FIFO queue with deterministic service of BL/2
//!   DRAM clock cycles (clock = data rate / 2), so BL16 at 5600 MT/s takes
//!   8 × 2000/5600 ≈ 2.857 ns;
//! - a constant first-access latency is added to every request after it
//!   leaves the queue; it does not occupy the queue;
//! - banks, row buffers, refresh and scheduler reordering are not modeled.
//!
//! Statistics skip the first 10% of requests (by arrival order) as warm-up.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use crate::config::CACHE_LINE_BYTES;

/// Utilization at or above which a run is refused.
pub const MAX_UTILIZATION: f64 = 0.98;
pub const MIN_REQUESTS: u64 = 10_000;
pub const DEFAULT_FIRST_ACCESS_NS: f64 = 14.0;
/// Fraction of requests discarded as warm-up.
pub const WARMUP_FRACTION: f64 = 0.10;
/// Published estimate of the single-queue latency penalty above 60%
/// utilization, in percent. Reported next to measurements, never asserted.
pub const PUBLISHED_LATENCY_BAND_PCT: (f64, f64) = (15.0, 25.0);

const ROUTING_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QueueError {
    #[error("offered utilization {0:.4} is at or above the {MAX_UTILIZATION} cap")]
    UnstableLoad(f64),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("utilization must lie in [0, 1), got {0}")]
    InvalidUtilization(f64),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Routing {
    #[default]
    RoundRobin,
    UniformRandom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub subchannel_count: u32,
    pub data_rate_mts: u32,
    pub burst_length: u32,
    pub first_access_latency_ns: f64,
    /// Aggregate Poisson arrival rate, requests per ns.
    pub arrival_rate_per_ns: f64,
    pub routing: Routing,
    pub duration_requests: u64,
    pub seed: u64,
}

impl SimConfig {
    /// BL16, 14 ns first access, round-robin, 10^5 requests, seed 0, and an
    /// arrival rate giving 50% utilization per queue.
    pub fn new(subchannel_count: u32, data_rate_mts: u32) -> Self {
        let mut c = Self {
            subchannel_count,
            data_rate_mts,
            burst_length: 16,
            first_access_latency_ns: DEFAULT_FIRST_ACCESS_NS,
            arrival_rate_per_ns: 0.0,
            routing: Routing::RoundRobin,
            duration_requests: 100_000,
            seed: 0,
        };
        c.arrival_rate_per_ns = c.lambda_for_utilization(0.5);
        c
    }

    pub fn service_time_ns(&self) -> f64 {
        service_time_ns(self.burst_length, self.data_rate_mts)
    }

    /// Offered utilization per queue, `λ·S / n`.
    pub fn utilization(&self) -> f64 {
        self.arrival_rate_per_ns * self.service_time_ns() / f64::from(self.subchannel_count)
    }

    pub fn lambda_for_utilization(&self, rho: f64) -> f64 {
        rho * f64::from(self.subchannel_count) / self.service_time_ns()
    }

    pub fn with_utilization(mut self, rho: f64) -> Self {
        self.arrival_rate_per_ns = self.lambda_for_utilization(rho);
        self
    }

    pub fn with_lambda(mut self, lambda_per_ns: f64) -> Self {
        self.arrival_rate_per_ns = lambda_per_ns;
        self
    }

    pub fn with_subchannels(mut self, n: u32) -> Self {
        self.subchannel_count = n;
        self
    }

    pub fn with_requests(mut self, n: u64) -> Self {
        self.duration_requests = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_routing(mut self, routing: Routing) -> Self {
        self.routing = routing;
        self
    }

    pub fn with_burst_length(mut self, bl: u32) -> Self {
        self.burst_length = bl;
        self
    }

    /// Peak data-bus bandwidth of the simulated sub-channels, GB/s.
    pub fn peak_bandwidth_gbs(&self) -> f64 {
        crate::config::peak_for_bits(32 * self.subchannel_count, self.data_rate_mts)
    }

    pub fn validate(&self) -> Result<(), QueueError> {
        let bad = |m: &str| Err(QueueError::InvalidConfig(m.to_string()));
        if !matches!(self.subchannel_count, 1 | 2) {
            return bad("subchannel_count must be 1 or 2");
        }
        if self.data_rate_mts == 0 {
            return bad("data_rate_mts must be positive");
        }
        if !matches!(self.burst_length, 16 | 32) {
            return bad("burst_length must be 16 or 32");
        }
        if !(self.first_access_latency_ns.is_finite() && self.first_access_latency_ns >= 0.0) {
            return bad("first_access_latency_ns must be finite and non-negative");
        }
        if !(self.arrival_rate_per_ns.is_finite() && self.arrival_rate_per_ns > 0.0) {
            return bad("arrival rate must be positive");
        }
        if self.duration_requests < MIN_REQUESTS {
            return bad("duration_requests must be at least 10000");
        }
        let rho = self.utilization();
        if rho >= MAX_UTILIZATION {
            return Err(QueueError::UnstableLoad(rho));
        }
        Ok(())
    }
}

/// BL/2 clock cycles at a clock of `data_rate/2` MHz, in ns.
pub fn service_time_ns(burst_length: u32, data_rate_mts: u32) -> f64 {
    f64::from(burst_length / 2) * 2000.0 / f64::from(data_rate_mts)
}

/// Mean M/D/1 queueing delay `ρS / (2(1−ρ))` (Pollaczek–Khinchine).
pub fn analytic_md1_wait(rho: f64, service_time_ns: f64) -> Result<f64, QueueError> {
    if !(0.0..1.0).contains(&rho) {
        return Err(QueueError::InvalidUtilization(rho));
    }
    Ok(rho * service_time_ns / (2.0 * (1.0 - rho)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueueSimResult {
    pub mean_total_latency_ns: f64,
    pub mean_queue_wait_ns: f64,
    pub p95_latency_ns: f64,
    pub achieved_utilization: f64,
    pub throughput_gbs: f64,
    pub requests_served: u64,
    pub offered_utilization: f64,
    pub max_concurrent_bursts: u32,
}

/// Lifecycle of one request, in ns since simulation start.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct RequestRecord {
    pub queue: u32,
    pub arrival_ns: f64,
    pub service_start_ns: f64,
    pub completion_ns: f64,
}

impl RequestRecord {
    pub fn wait_ns(&self) -> f64 {
        self.service_start_ns - self.arrival_ns
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
enum EventKind {
    Arrival,
    BurstDone { queue: usize },
}

#[derive(Copy, Clone, Debug)]
struct Event {
    time: f64,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.seq.cmp(&other.seq))
    }
}

#[derive(Default)]
struct CommandQueue {
    waiting: VecDeque<usize>,
    in_service: Option<usize>,
}

struct Engine {
    events: BinaryHeap<Reverse<Event>>,
    seq: u64,
}

impl Engine {
    fn schedule(&mut self, time: f64, kind: EventKind) {
        self.seq += 1;
        self.events.push(Reverse(Event { time, seq: self.seq, kind }));
    }
}

/// Runs the simulation and also returns the per-request trace.
pub fn run_simulation_traced(config: &SimConfig) -> Result<(QueueSimResult, Vec<RequestRecord>), QueueError> {
    config.validate()?;
    let n_queues = config.subchannel_count as usize;
    let total = config.duration_requests as usize;
    let service = config.service_time_ns();

    let mut arrivals_rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut routing_rng = ChaCha8Rng::seed_from_u64(config.seed);
    routing_rng.set_stream(ROUTING_STREAM);
    let inter_arrival =
        Exp::new(config.arrival_rate_per_ns).map_err(|e| QueueError::InvalidConfig(format!("arrival rate: {e}")))?;

    let mut records: Vec<RequestRecord> = Vec::with_capacity(total);
    let mut queues: Vec<CommandQueue> = (0..n_queues).map(|_| CommandQueue::default()).collect();
    let mut engine = Engine { events: BinaryHeap::new(), seq: 0 };
    let mut next_rr = 0usize;
    let mut busy = 0u32;
    let mut max_busy = 0u32;

    engine.schedule(inter_arrival.sample(&mut arrivals_rng), EventKind::Arrival);

    while let Some(Reverse(ev)) = engine.events.pop() {
        let now = ev.time;
        let start_on = match ev.kind {
            EventKind::Arrival => {
                let q = match (n_queues, config.routing) {
                    (1, _) => 0,
                    (_, Routing::RoundRobin) => {
                        let q = next_rr;
                        next_rr = (next_rr + 1) % n_queues;
                        q
                    }
                    (_, Routing::UniformRandom) => routing_rng.random_range(0..n_queues),
                };
                let id = records.len();
                records.push(RequestRecord {
                    queue: q as u32,
                    arrival_ns: now,
                    service_start_ns: f64::NAN,
                    completion_ns: f64::NAN,
                });
                queues[q].waiting.push_back(id);
                if records.len() < total {
                    engine.schedule(now + inter_arrival.sample(&mut arrivals_rng), EventKind::Arrival);
                }
                (queues[q].in_service.is_none()).then_some(q)
            }
            EventKind::BurstDone { queue } => {
                let done = queues[queue].in_service.take().expect("completion without service");
                records[done].completion_ns = now;
                busy -= 1;
                Some(queue)
            }
        };
        if let Some(q) = start_on {
            if let Some(id) = queues[q].waiting.pop_front() {
                queues[q].in_service = Some(id);
                records[id].service_start_ns = now;
                busy += 1;
                max_busy = max_busy.max(busy);
                engine.schedule(now + service, EventKind::BurstDone { queue: q });
            }
        }
    }

    let result = summarize(config, &records, max_busy);
    Ok((result, records))
}

pub fn run_simulation(config: &SimConfig) -> Result<QueueSimResult, QueueError> {
    run_simulation_traced(config).map(|(r, _)| r)
}

/// Number of requests discarded as warm-up for a run of `total` requests.
pub fn warmup_count(total: u64) -> u64 {
    (total as f64 * WARMUP_FRACTION).floor() as u64
}

fn summarize(config: &SimConfig, records: &[RequestRecord], max_busy: u32) -> QueueSimResult {
    let skip = warmup_count(records.len() as u64) as usize;
    let measured = &records[skip..];
    let n = measured.len() as f64;
    let overhead = config.first_access_latency_ns + config.service_time_ns();

    let mut latencies: Vec<f64> = measured.iter().map(|r| r.wait_ns() + overhead).collect();
    let mean_wait = measured.iter().map(RequestRecord::wait_ns).sum::<f64>() / n;
    let mean_latency = latencies.iter().sum::<f64>() / n;
    latencies.sort_by(f64::total_cmp);
    let rank = ((0.95 * n).ceil() as usize).clamp(1, latencies.len());
    let p95 = latencies[rank - 1];

    let window_start = measured.first().map_or(0.0, |r| r.arrival_ns);
    let window_end = measured.iter().map(|r| r.completion_ns).fold(window_start, f64::max);
    let window = window_end - window_start;
    let busy_time = n * config.service_time_ns();

    QueueSimResult {
        mean_total_latency_ns: mean_latency,
        mean_queue_wait_ns: mean_wait,
        p95_latency_ns: p95,
        achieved_utilization: busy_time / (window * f64::from(config.subchannel_count)),
        throughput_gbs: n * f64::from(CACHE_LINE_BYTES) / window,
        requests_served: measured.len() as u64,
        offered_utilization: config.utilization(),
        max_concurrent_bursts: max_busy,
    }
}

/// Peak number of bursts in flight at once across all sub-channels.
pub fn concurrency_demo(config: &SimConfig) -> Result<u32, QueueError> {
    run_simulation(config).map(|r| r.max_concurrent_bursts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScComparison {
    pub aggregate_lambda_per_ns: f64,
    pub single: QueueSimResult,
    pub dual: QueueSimResult,
    /// `(L1 − L2) / L2` on mean total latency.
    pub relative_increase: f64,
    pub published_band_pct: (f64, f64),
}

impl ScComparison {
    pub fn within_published_band(&self) -> bool {
        let pct = self.relative_increase * 100.0;
        PUBLISHED_LATENCY_BAND_PCT.0 <= pct && pct <= PUBLISHED_LATENCY_BAND_PCT.1
    }
}

/// Same aggregate arrival stream through one queue and through two.
pub fn compare_sc_counts(base: &SimConfig, aggregate_lambda: f64) -> Result<ScComparison, QueueError> {
    let one = base.clone().with_subchannels(1).with_lambda(aggregate_lambda);
    let two = base.clone().with_subchannels(2).with_lambda(aggregate_lambda);
    let (single, dual) = rayon::join(|| run_simulation(&one), || run_simulation(&two));
    let (single, dual) = (single?, dual?);
    Ok(ScComparison {
        aggregate_lambda_per_ns: aggregate_lambda,
        relative_increase: (single.mean_total_latency_ns - dual.mean_total_latency_ns) / dual.mean_total_latency_ns,
        single,
        dual,
        published_band_pct: PUBLISHED_LATENCY_BAND_PCT,
    })
}

/// Independent runs over a set of per-queue utilizations, in parallel.
pub fn sweep_utilization(base: &SimConfig, rhos: &[f64]) -> Vec<Result<QueueSimResult, QueueError>> {
    rhos.par_iter().map(|&rho| run_simulation(&base.clone().with_utilization(rho))).collect()
}

/// `(bin_start_ns, count)` histogram of total latency over measured requests.
pub fn latency_histogram(config: &SimConfig, records: &[RequestRecord], bin_ns: f64) -> Vec<(f64, u64)> {
    assert!(bin_ns > 0.0);
    let skip = warmup_count(records.len() as u64) as usize;
    let overhead = config.first_access_latency_ns + config.service_time_ns();
    let mut bins: Vec<u64> = Vec::new();
    for r in &records[skip..] {
        let idx = ((r.wait_ns() + overhead) / bin_ns).floor() as usize;
        if idx >= bins.len() {
            bins.resize(idx + 1, 0);
        }
        bins[idx] += 1;
    }
    bins.into_iter().enumerate().map(|(i, c)| (i as f64 * bin_ns, c)).collect()
}
