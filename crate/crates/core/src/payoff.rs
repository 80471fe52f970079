//! The informed sender's interim payoff and the disclose-versus-conceal
//! comparison.
//!
//! Sign convention, fixed for the whole crate: [`concealment_gain`] is
//! `Π(x̂(∅), y) − Π(x̂(y), y)`, conceal minus disclose. It is strictly
//! positive exactly on the interior of the non-disclosure interval and
//! negative outside it.

use serde::{Deserialize, Serialize};

use crate::beliefs::{posterior_theta_given_xy, posterior_theta_given_y, predictive_x_given_y, ModelParams};
use crate::continuation::disclosed_threshold;
use crate::normal;

/// `Π(x, y, b) = (r + b + θ̄(y)) (1 − F(x|y)) + f(x|y) / (α + γ)`.
pub fn sender_interim_payoff(params: &ModelParams, x: f64, y: f64) -> f64 {
    let law = predictive_x_given_y(params, y);
    (params.total_weight() + law.mean) * law.sf(x) + law.pdf(x) / params.precision_theta_given_y()
}

/// `∂Π/∂x = −(r + b + θ̄(x, y)) f(x|y)`.
pub fn sender_payoff_slope(params: &ModelParams, x: f64, y: f64) -> f64 {
    let law = predictive_x_given_y(params, y);
    -(params.total_weight() + posterior_theta_given_xy(params, x, y).mean) * law.pdf(x)
}

/// `ζ(x, y) = (f(x̂(y)|y) − f(x|y)) / (F(x̂(y)|y) − F(x|y))`.
///
/// Equivalently `−h · E[t − θ̄(y)]` for `t ~ x|y` restricted to the segment
/// between `x` and `x̂(y)`, which is how it is evaluated. At `x = x̂(y)` this
/// is the removable-singularity limit `f′/f = h_{x|y} (θ̄(y) − x̂(y))`.
pub fn zeta(params: &ModelParams, x: f64, y: f64) -> f64 {
    let law = predictive_x_given_y(params, y);
    let u = law.standardize(x);
    let v = law.standardize(disclosed_threshold(params, y));
    let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
    -law.precision.sqrt() * normal::truncated_mean(lo, hi)
}

/// `F(x_empty|y) − F(x̂(y)|y)`, signed, with tail-safe differencing.
pub fn threshold_mass_shift(params: &ModelParams, x_empty: f64, y: f64) -> f64 {
    let law = predictive_x_given_y(params, y);
    let x_disc = disclosed_threshold(params, y);
    if x_empty >= x_disc {
        law.interval_prob(x_disc, x_empty)
    } else {
        -law.interval_prob(x_empty, x_disc)
    }
}

/// `r + b + θ̄(y) − ζ(x_empty, y)/(α + γ)`.
///
/// The concealment gain factors as `−[F(x_empty|y) − F(x̂(y)|y)]` times
/// this term, so away from `x̂(y) = x_empty` its zeros are the sender's
/// indifference points. It equals `r + b` wherever `x̂(y) = x_empty`.
pub fn indifference_factor(params: &ModelParams, x_empty: f64, y: f64) -> f64 {
    params.total_weight() + posterior_theta_given_y(params, y).mean
        - zeta(params, x_empty, y) / params.precision_theta_given_y()
}

/// `Π(x_empty, y) − Π(x̂(y), y)` in factored form.
pub fn concealment_gain(params: &ModelParams, x_empty: f64, y: f64) -> f64 {
    -threshold_mass_shift(params, x_empty, y) * indifference_factor(params, x_empty, y)
}

/// The same difference taken directly from two payoff evaluations. Loses
/// all relative accuracy in the tails; kept as an independent check.
pub fn concealment_gain_direct(params: &ModelParams, x_empty: f64, y: f64) -> f64 {
    sender_interim_payoff(params, x_empty, y)
        - sender_interim_payoff(params, disclosed_threshold(params, y), y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffDiagnostics {
    pub pi_disclose: f64,
    pub pi_conceal: f64,
    pub net_concealment_gain: f64,
}

impl PayoffDiagnostics {
    pub fn at(params: &ModelParams, x_empty: f64, y: f64) -> Self {
        let pi_disclose = sender_interim_payoff(params, disclosed_threshold(params, y), y);
        let pi_conceal = sender_interim_payoff(params, x_empty, y);
        Self {
            pi_disclose,
            pi_conceal,
            net_concealment_gain: pi_conceal - pi_disclose,
        }
    }
}
