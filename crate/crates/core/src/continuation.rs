//! Receivers' continuation game: switching thresholds after a disclosed
//! signal, after silence, and the threshold the sender would pick himself.

use serde::{Deserialize, Serialize};

use crate::beliefs::{posterior_theta_given_x, predictive_y_given_x, ModelParams};
use crate::error::{Error, Result};
use crate::roots;

/// Tolerance on `x` for the silence threshold.
pub const THRESHOLD_XTOL: f64 = 1e-12;

/// Half-width of the initial search window, in prior standard deviations.
pub const BRACKET_PRIOR_SDS: f64 = 12.0;

/// A public message: the sender's signal, or silence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Message {
    Empty,
    Disclosed(f64),
}

/// How the uninformed-sender term enters the silence posterior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BayesForm {
    /// `E[θ | x, ∅] ∝ (1-p) θ̄(x) + p ∫_{y1}^{y2} θ̄(x,y) f(y|x) dy`.
    #[default]
    Standard,
    /// `(1-p) θ̄(x) Pr(y ∈ [y1,y2] | x) + p ∫_{y1}^{y2} θ̄(x,y) f(y|x) dy`,
    /// the form with the interval probability multiplying the uninformed term.
    PaperLiteral,
}

impl std::str::FromStr for BayesForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Self::Standard),
            "paper_literal" => Ok(Self::PaperLiteral),
            other => Err(format!(
                "unknown bayes_form `{other}` (expected standard | paper_literal)"
            )),
        }
    }
}

impl std::fmt::Display for BayesForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Standard => "standard",
            Self::PaperLiteral => "paper_literal",
        })
    }
}

/// The set of sender signals concealed in equilibrium, `[y1, y2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonDisclosureInterval {
    pub y1: f64,
    pub y2: f64,
}

impl NonDisclosureInterval {
    pub fn new(y1: f64, y2: f64) -> Self {
        debug_assert!(y1 <= y2, "interval bounds out of order: {y1} > {y2}");
        Self { y1, y2 }
    }

    pub fn empty_at(y: f64) -> Self {
        Self { y1: y, y2: y }
    }

    pub fn width(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn is_empty(&self) -> bool {
        self.y1 >= self.y2
    }

    /// Open-interior membership.
    pub fn contains(&self, y: f64) -> bool {
        self.y1 < y && y < self.y2
    }
}

/// Receivers' switching policy: act iff `x ≥ threshold(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRule {
    /// `x̂(y) = intercept + slope * y` for disclosed messages.
    pub intercept: f64,
    pub slope: f64,
    /// Threshold after silence.
    pub x_empty: f64,
}

impl ThresholdRule {
    pub fn new(params: &ModelParams, x_empty: f64) -> Self {
        Self {
            intercept: -params.gamma * params.mu / params.beta,
            slope: -params.alpha / params.beta,
            x_empty,
        }
    }

    pub fn x_of_y(&self, y: f64) -> f64 {
        self.intercept + self.slope * y
    }

    pub fn threshold(&self, message: Message) -> f64 {
        match message {
            Message::Empty => self.x_empty,
            Message::Disclosed(y) => self.x_of_y(y),
        }
    }
}

/// `x̂(y) = -(αy + γμ)/β`: the marginal receiver's posterior mean is zero.
pub fn disclosed_threshold(params: &ModelParams, y: f64) -> f64 {
    -(params.alpha * y + params.gamma * params.mu) / params.beta
}

/// Inverse of [`disclosed_threshold`]: the signal `y` with `x̂(y) = x`.
pub fn signal_inducing_threshold(params: &ModelParams, x: f64) -> f64 {
    -(params.beta * x + params.gamma * params.mu) / params.alpha
}

/// `x*(y, b) = -(αy + γμ + (α+β+γ)(r+b))/β`, the maximizer of the
/// sender's interim payoff over thresholds.
pub fn sender_optimal_threshold(params: &ModelParams, y: f64) -> f64 {
    -(params.alpha * y + params.gamma * params.mu + params.precision_theta_given_xy() * params.total_weight())
        / params.beta
}

/// `Δ = x̂(y) - x*(y, b) = (α+β+γ)(r+b)/β`, independent of `y`.
pub fn conflict_of_interests(params: &ModelParams) -> f64 {
    params.precision_theta_given_xy() * params.total_weight() / params.beta
}

/// The marginal-receiver condition after silence, evaluated at threshold `x`.
///
/// For [`BayesForm::Standard`] this is the posterior mean `E[θ | x, ∅]`.
/// For [`BayesForm::PaperLiteral`] it is `∫_{y1}^{y2} [(1−p) θ̄(x) + p θ̄(x,y)]
/// f(y|x) dy` divided by `Pr(y ∈ [y1,y2] | x)`, that is
/// `(1−p) θ̄(x) + p E[θ̄(x,y) | y ∈ [y1,y2], x]`; the division keeps the
/// roots and the scale.
/// An empty interval carries no inference and reduces both to `θ̄(x)`.
pub fn empty_message_condition(
    params: &ModelParams,
    interval: &NonDisclosureInterval,
    x: f64,
    form: BayesForm,
) -> f64 {
    let uninformed = posterior_theta_given_x(params, x).mean;
    if interval.is_empty() {
        return uninformed;
    }
    let y_law = predictive_y_given_x(params, x);
    let prob = y_law.interval_prob(interval.y1, interval.y2);
    if prob == 0.0 {
        return uninformed;
    }
    let mean_y = y_law.interval_mean(interval.y1, interval.y2);
    let concealed = (params.alpha * mean_y + params.beta * x + params.gamma * params.mu)
        / params.precision_theta_given_xy();
    let p = params.p;
    match form {
        BayesForm::Standard => {
            let w = p * prob;
            ((1.0 - p) * uninformed + w * concealed) / ((1.0 - p) + w)
        }
        BayesForm::PaperLiteral => (1.0 - p) * uninformed + p * concealed,
    }
}

/// Threshold `x̂(∅)` that makes the marginal receiver indifferent after
/// silence, for a given concealment interval.
pub fn empty_message_threshold(
    params: &ModelParams,
    interval: &NonDisclosureInterval,
    form: BayesForm,
) -> Result<f64> {
    if interval.is_empty() {
        return Ok(params.full_disclosure_threshold());
    }
    let cond = |x: f64| empty_message_condition(params, interval, x, form);
    let center = params.mu;
    let mut half = BRACKET_PRIOR_SDS * params.prior_sd();
    for _ in 0..40 {
        let (lo, hi) = (center - half, center + half);
        let (flo, fhi) = (cond(lo), cond(hi));
        if flo == 0.0 {
            return Ok(lo);
        }
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo.signum() != fhi.signum() {
            return roots::brent(cond, lo, hi, THRESHOLD_XTOL, 200).map(|r| r.x);
        }
        half *= 2.0;
    }
    Err(Error::BracketFailure {
        what: "silence threshold condition",
        lower: center - half,
        upper: center + half,
    })
}
