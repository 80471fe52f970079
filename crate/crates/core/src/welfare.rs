//! Receivers' ex-ante welfare, the full-disclosure benchmark, the
//! misinterpretation / concealment decomposition, per-signal interim gains,
//! and sweeps over the sender's bias.
//!
//! Welfare is always the receivers' aggregate payoff `(r + θ) A`; the
//! sender's bias `b` enters only through the equilibrium it induces.
//! Concealment terms are signed as concealed-minus-disclosed welfare,
//! `(r + θ)(F(x̂(y)|θ) − F(x̂(∅)|θ))`.

use std::cell::RefCell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beliefs::{GaussianBelief, ModelParams};
use crate::continuation::disclosed_threshold;
use crate::equilibrium::{solve_equilibrium, Equilibrium, SolverConfig};
use crate::error::{Error, Result};
use crate::payoff::{concealment_gain, threshold_mass_shift};
use crate::quadrature::{integrate, QuadOptions};

/// Half-width of the θ integration domain, in prior standard deviations.
pub const THETA_PRIOR_SDS: f64 = 10.0;

const OUTER: QuadOptions = QuadOptions::new(1e-10, 1e-12);
const INNER: QuadOptions = QuadOptions::new(1e-12, 1e-12);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelfareReport {
    pub v_total: f64,
    pub v_full_disclosure: f64,
    pub misinterpretation_gain: f64,
    pub concealment_gain_total: f64,
    /// `v_total − (v_full_disclosure + misinterpretation_gain + concealment_gain_total)`.
    pub identity_residual: f64,
}

/// Per-signal interim gains from concealment over a grid of sender signals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterimGainCurve {
    pub y_grid: Vec<f64>,
    /// `Π(x̂(∅), y) − Π(x̂(y), y)`, bias included.
    pub sender_gain: Vec<f64>,
    /// `F(x̂(y)|y) − F(x̂(∅)|y)`: extra mass of receivers acting under silence.
    pub aggregate_action_gain: Vec<f64>,
    /// `sender_gain − b · aggregate_action_gain`, the receivers' own gain.
    pub welfare_gain: Vec<f64>,
    /// Whether `y` lies strictly inside the non-disclosure interval.
    pub in_interval: Vec<bool>,
}

/// One point of a bias sweep; failed solves are kept with their error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub b: f64,
    pub outcome: Result<(Equilibrium, WelfareReport)>,
}

/// Aggregate action `1 − F(threshold | θ)` of a continuum of receivers.
pub fn aggregate_action(params: &ModelParams, theta: f64, threshold: f64) -> f64 {
    GaussianBelief::new(theta, params.beta).sf(threshold)
}

/// `F(upper|θ) − F(lower|θ)` for a receiver's signal, signed.
fn signal_mass_between(params: &ModelParams, theta: f64, lower: f64, upper: f64) -> f64 {
    let law = GaussianBelief::new(theta, params.beta);
    if upper >= lower {
        law.interval_prob(lower, upper)
    } else {
        -law.interval_prob(upper, lower)
    }
}

/// Probability that every disclosed signal leads a receiver to act,
/// `∫ (1 − F(x̂(y)|θ)) f(y|θ) dy = Φ(((α+β)θ + γμ)/√(α+β))`.
fn disclosed_action_all_signals(params: &ModelParams, theta: f64) -> f64 {
    let s = params.alpha + params.beta;
    crate::normal::cdf((s * theta + params.gamma * params.mu) / s.sqrt())
}

fn theta_domain(params: &ModelParams) -> (f64, f64) {
    let half = THETA_PRIOR_SDS * params.prior_sd();
    (params.mu - half, params.mu + half)
}

/// Integrates `g(θ)` against the prior, propagating errors raised inside `g`.
fn prior_expectation<G>(params: &ModelParams, g: G) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let prior = params.prior();
    let failure = RefCell::new(None);
    let (lo, hi) = theta_domain(params);
    let out = integrate(
        |theta| match g(theta) {
            Ok(v) => v * prior.pdf(theta),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        &OUTER,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(out.value),
    }
}

/// `∫_{y1}^{y2} h(y) f(y|θ) dy`.
fn concealed_signal_integral<H>(params: &ModelParams, eq: &Equilibrium, theta: f64, h: H) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    if eq.interval.is_empty() {
        return Ok(0.0);
    }
    let y_law = GaussianBelief::new(theta, params.alpha);
    integrate(|y| h(y) * y_law.pdf(y), eq.interval.y1, eq.interval.y2, &INNER).map(|i| i.value)
}

/// `E[g(θ) A]` under the equilibrium disclosure rule, where `A` is the
/// aggregate action after the sender's message.
fn expected_under_rule<G>(params: &ModelParams, eq: &Equilibrium, g: G) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let p = params.p;
    prior_expectation(params, |theta| {
        let silent_prob = 1.0 - p
            + p * GaussianBelief::new(theta, params.alpha).interval_prob(eq.interval.y1, eq.interval.y2);
        let silent = silent_prob * aggregate_action(params, theta, eq.x_empty);
        let concealed_disclosure = concealed_signal_integral(params, eq, theta, |y| {
            aggregate_action(params, theta, disclosed_threshold(params, y))
        })?;
        let disclosed = p * (disclosed_action_all_signals(params, theta) - concealed_disclosure);
        Ok(g(theta) * (silent + disclosed))
    })
}

/// Ex-ante receiver welfare under the equilibrium disclosure rule.
///
/// Silence (uninformed, or informed with `y` concealed) yields
/// `(r+θ)(1 − F(x̂(∅)|θ))`; a disclosed `y` yields `(r+θ)(1 − F(x̂(y)|θ))`.
/// The disclosed part over `y ∉ [y1, y2]` is the closed-form all-signal
/// term minus a quadrature over the interval.
pub fn ex_ante_welfare(params: &ModelParams, eq: &Equilibrium) -> Result<f64> {
    expected_under_rule(params, eq, |theta| params.r + theta)
}

/// Ex-ante expected aggregate action under the equilibrium disclosure rule.
pub fn ex_ante_aggregate_action(params: &ModelParams, eq: &Equilibrium) -> Result<f64> {
    expected_under_rule(params, eq, |_| 1.0)
}

/// Welfare when the informed sender always discloses.
pub fn full_disclosure_welfare(params: &ModelParams) -> Result<f64> {
    let p = params.p;
    let x0 = params.full_disclosure_threshold();
    prior_expectation(params, |theta| {
        Ok((params.r + theta)
            * ((1.0 - p) * aggregate_action(params, theta, x0)
                + p * disclosed_action_all_signals(params, theta)))
    })
}

/// Welfare change from receivers reading an uninformed sender's silence as
/// possible concealment: `(1−p) E[(r+θ)(F(x̂₀|θ) − F(x̂(∅)|θ))]`.
pub fn misinterpretation_gain(params: &ModelParams, eq: &Equilibrium) -> Result<f64> {
    let x0 = params.full_disclosure_threshold();
    let v = prior_expectation(params, |theta| {
        Ok((params.r + theta) * signal_mass_between(params, theta, eq.x_empty, x0))
    })?;
    Ok((1.0 - params.p) * v)
}

/// Welfare change from signals actually withheld:
/// `p E[(r+θ) ∫_{y1}^{y2} (F(x̂(y)|θ) − F(x̂(∅)|θ)) f(y|θ) dy]`.
pub fn concealment_gain_total(params: &ModelParams, eq: &Equilibrium) -> Result<f64> {
    let v = prior_expectation(params, |theta| {
        let shift = concealed_signal_integral(params, eq, theta, |y| {
            signal_mass_between(params, theta, eq.x_empty, disclosed_threshold(params, y))
        })?;
        Ok((params.r + theta) * shift)
    })?;
    Ok(params.p * v)
}

/// The concealment term computed signal by signal: `p ∫_{y1}^{y2}
/// (sender_gain − b · aggregate_action_gain) f(y) dy` with `f` the marginal
/// of `y`.
pub fn concealment_gain_by_signal(params: &ModelParams, eq: &Equilibrium) -> Result<f64> {
    if eq.interval.is_empty() {
        return Ok(0.0);
    }
    let marginal = params.marginal_y();
    let v = integrate(
        |y| interim_welfare_gain(params, eq.x_empty, y) * marginal.pdf(y),
        eq.interval.y1,
        eq.interval.y2,
        &INNER,
    )?;
    Ok(params.p * v.value)
}

fn interim_action_gain(params: &ModelParams, x_empty: f64, y: f64) -> f64 {
    -threshold_mass_shift(params, x_empty, y)
}

fn interim_welfare_gain(params: &ModelParams, x_empty: f64, y: f64) -> f64 {
    concealment_gain(params, x_empty, y) - params.b * interim_action_gain(params, x_empty, y)
}

pub fn welfare_decomposition(params: &ModelParams, eq: &Equilibrium) -> Result<WelfareReport> {
    let v_total = ex_ante_welfare(params, eq)?;
    let v_full_disclosure = full_disclosure_welfare(params)?;
    let misinterpretation_gain = misinterpretation_gain(params, eq)?;
    let concealment_gain_total = concealment_gain_total(params, eq)?;
    Ok(WelfareReport {
        v_total,
        v_full_disclosure,
        misinterpretation_gain,
        concealment_gain_total,
        identity_residual: v_total - (v_full_disclosure + misinterpretation_gain + concealment_gain_total),
    })
}

pub fn interim_gain_curve(params: &ModelParams, eq: &Equilibrium, y_grid: &[f64]) -> InterimGainCurve {
    let x = eq.x_empty;
    let sender_gain: Vec<f64> = y_grid.iter().map(|&y| concealment_gain(params, x, y)).collect();
    let aggregate_action_gain: Vec<f64> = y_grid
        .iter()
        .map(|&y| interim_action_gain(params, x, y))
        .collect();
    let welfare_gain = sender_gain
        .iter()
        .zip(&aggregate_action_gain)
        .map(|(s, a)| s - params.b * a)
        .collect();
    InterimGainCurve {
        y_grid: y_grid.to_vec(),
        sender_gain,
        aggregate_action_gain,
        welfare_gain,
        in_interval: y_grid.iter().map(|&y| eq.interval.contains(y)).collect(),
    }
}

/// `n` evenly spaced biases over `[−|r|, |r|]`, with points within `1e−3` of
/// the degenerate value `−r` pushed `1e−3` away from it, into the grid.
pub fn default_bias_grid(r: f64, n: usize) -> Vec<f64> {
    const GAP: f64 = 1e-3;
    let (lo, hi) = (-r.abs(), r.abs());
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let b = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            if (b + r).abs() < GAP {
                // nudge toward the interior of [lo, hi]
                if -r <= 0.0 {
                    -r + GAP
                } else {
                    -r - GAP
                }
            } else {
                b
            }
        })
        .collect()
}

/// Solves the equilibrium and its welfare at each bias in `b_grid`. Points
/// run in parallel; the output follows grid order and a failed point does
/// not stop the sweep.
pub fn bias_sweep(base: &ModelParams, b_grid: &[f64], config: &SolverConfig) -> Vec<SweepPoint> {
    b_grid
        .par_iter()
        .map(|&b| {
            let params = base.with_bias(b);
            let outcome = solve_equilibrium(&params, config).and_then(|eq| {
                if !eq.converged {
                    return Err(Error::NoConvergence {
                        iterations: eq.iterations,
                        best_residual: eq.residuals.max_abs(),
                    });
                }
                let report = welfare_decomposition(&params, &eq)?;
                Ok((eq, report))
            });
            SweepPoint { b, outcome }
        })
        .collect()
}
