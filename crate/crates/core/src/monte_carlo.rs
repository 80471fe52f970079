//! Finite-sample simulation of the game, used as an oracle for the analytic
//! aggregate action and welfare.
//!
//! Draws are split into fixed-size batches and batch `i` always uses ChaCha
//! stream `i` of the run seed, so results are bit-identical whatever the
//! number of worker threads. Batch statistics are merged in batch order.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beliefs::ModelParams;
use crate::equilibrium::{disclosure_rule, Equilibrium};

/// Game draws per RNG stream.
pub const DRAWS_PER_BATCH: usize = 1_000;
/// Receiver signals per RNG stream in [`simulate_aggregate_action`].
pub const SIGNALS_PER_BATCH: usize = 1 << 16;

pub const DEFAULT_RECEIVERS_PER_DRAW: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub mean_welfare: f64,
    /// Sample standard deviation over `√draws`; absent for a single draw.
    pub se_welfare: Option<f64>,
    pub mean_aggregate_action: f64,
    pub se_action: Option<f64>,
    pub draws: usize,
    pub receivers_per_draw: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    welfare: f64,
    welfare_sq: f64,
    action: f64,
    action_sq: f64,
}

impl Moments {
    fn push(&mut self, welfare: f64, action: f64) {
        self.n += 1;
        self.welfare += welfare;
        self.welfare_sq += welfare * welfare;
        self.action += action;
        self.action_sq += action * action;
    }

    fn merge(mut self, other: &Self) -> Self {
        self.n += other.n;
        self.welfare += other.welfare;
        self.welfare_sq += other.welfare_sq;
        self.action += other.action;
        self.action_sq += other.action_sq;
        self
    }
}

fn mean_and_se(sum: f64, sum_sq: f64, n: usize) -> (f64, Option<f64>) {
    let nf = n as f64;
    let mean = sum / nf;
    if n < 2 {
        return (mean, None);
    }
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, Some((var / nf).sqrt()))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Counts how many of `n` signals `θ + z/√β` clear `threshold`.
fn count_acting<R: rand::Rng>(
    rng: &mut R,
    params: &ModelParams,
    theta: f64,
    threshold: f64,
    n: usize,
) -> usize {
    let cutoff = (threshold - theta) * params.beta.sqrt();
    (0..n)
        .filter(|_| {
            let z: f64 = StandardNormal.sample(rng);
            z >= cutoff
        })
        .count()
}

/// Simulates `draws` independent plays of the game under `eq`, each with
/// `receivers_per_draw` receivers, and reports mean aggregate action and
/// mean realized welfare `(r + θ) A`.
pub fn simulate(
    params: &ModelParams,
    eq: &Equilibrium,
    draws: usize,
    receivers_per_draw: usize,
    seed: u64,
) -> SimOutcome {
    assert!(
        draws >= 1 && receivers_per_draw >= 1,
        "need at least one draw and one receiver"
    );
    let batches = draws.div_ceil(DRAWS_PER_BATCH);
    let prior_sd = params.prior_sd();
    let sender_sd = params.alpha.recip().sqrt();

    let per_batch: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = stream_rng(seed, batch as u64);
            let start = batch * DRAWS_PER_BATCH;
            let len = DRAWS_PER_BATCH.min(draws - start);
            let mut acc = Moments::default();
            for _ in 0..len {
                let z: f64 = StandardNormal.sample(&mut rng);
                let theta = params.mu + prior_sd * z;
                let informed = rng.random::<f64>() < params.p;
                let z: f64 = StandardNormal.sample(&mut rng);
                let y = informed.then_some(theta + sender_sd * z);
                let threshold = eq.receiver_threshold(params, disclosure_rule(eq, y));
                let acting = count_acting(&mut rng, params, theta, threshold, receivers_per_draw);
                let action = acting as f64 / receivers_per_draw as f64;
                acc.push((params.r + theta) * action, action);
            }
            acc
        })
        .collect();

    let total = per_batch.iter().fold(Moments::default(), |acc, m| acc.merge(m));
    let (mean_welfare, se_welfare) = mean_and_se(total.welfare, total.welfare_sq, total.n);
    let (mean_aggregate_action, se_action) = mean_and_se(total.action, total.action_sq, total.n);
    SimOutcome {
        mean_welfare,
        se_welfare,
        mean_aggregate_action,
        se_action,
        draws,
        receivers_per_draw,
        seed,
    }
}

/// Fraction of `n` receiver signals drawn around a fixed `theta` that clear
/// `threshold`.
pub fn simulate_aggregate_action(
    params: &ModelParams,
    theta: f64,
    threshold: f64,
    n: usize,
    seed: u64,
) -> f64 {
    assert!(n >= 1, "need at least one receiver");
    let batches = n.div_ceil(SIGNALS_PER_BATCH);
    let acting: usize = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = stream_rng(seed, batch as u64);
            let len = SIGNALS_PER_BATCH.min(n - batch * SIGNALS_PER_BATCH);
            count_acting(&mut rng, params, theta, threshold, len)
        })
        .sum();
    acting as f64 / n as f64
}
