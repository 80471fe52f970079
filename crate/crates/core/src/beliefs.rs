//! Model primitives and the Gaussian conjugate-updating algebra.
//!
//! Prior `θ ~ N(μ, 1/γ)`, sender signal `y | θ ~ N(θ, 1/α)` observed with
//! probability `p`, receiver signals `x_i | θ ~ N(θ, 1/β)` i.i.d.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal;

/// The seven primitives of one game instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Precision of the sender's signal.
    pub alpha: f64,
    /// Precision of each receiver's private signal.
    pub beta: f64,
    /// Prior precision of the fundamental.
    pub gamma: f64,
    /// Prior mean of the fundamental.
    pub mu: f64,
    /// Externality: payoff effect of the aggregate action on every receiver.
    pub r: f64,
    /// Sender's own weight on the aggregate action.
    pub b: f64,
    /// Probability that the sender is informed.
    pub p: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, mu: f64, r: f64, b: f64, p: f64) -> Result<Self> {
        let params = Self {
            alpha,
            beta,
            gamma,
            mu,
            r,
            b,
            p,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, value) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParam {
                    field,
                    reason: format!("must be finite and > 0, got {value}"),
                });
            }
        }
        for (field, value) in [("mu", self.mu), ("r", self.r), ("b", self.b)] {
            if !value.is_finite() {
                return Err(Error::InvalidParam {
                    field,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidParam {
                field: "p",
                reason: format!("must lie in (0, 1), got {}", self.p),
            });
        }
        Ok(())
    }

    /// Same primitives with a different sender bias.
    pub fn with_bias(&self, b: f64) -> Self {
        Self { b, ..*self }
    }

    /// `r + b`, the sender's effective weight on the aggregate action.
    #[inline]
    pub fn total_weight(&self) -> f64 {
        self.r + self.b
    }

    /// `h_{θ|y} = α + γ`.
    #[inline]
    pub fn precision_theta_given_y(&self) -> f64 {
        self.alpha + self.gamma
    }

    /// `h_{θ|x,y} = α + β + γ`.
    #[inline]
    pub fn precision_theta_given_xy(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    /// Receivers' threshold when they know the sender has no signal: `-γμ/β`.
    #[inline]
    pub fn full_disclosure_threshold(&self) -> f64 {
        -self.gamma * self.mu / self.beta
    }

    /// Prior standard deviation of θ.
    #[inline]
    pub fn prior_sd(&self) -> f64 {
        self.gamma.recip().sqrt()
    }

    pub fn prior(&self) -> GaussianBelief {
        GaussianBelief::new(self.mu, self.gamma)
    }

    /// Marginal law of the sender's signal: `N(μ, 1/α + 1/γ)`.
    pub fn marginal_y(&self) -> GaussianBelief {
        GaussianBelief::new(self.mu, (self.alpha.recip() + self.gamma.recip()).recip())
    }

    /// Marginal law of a receiver's signal: `N(μ, 1/β + 1/γ)`.
    pub fn marginal_x(&self) -> GaussianBelief {
        GaussianBelief::new(self.mu, (self.beta.recip() + self.gamma.recip()).recip())
    }
}

/// A normal law parameterized by mean and precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBelief {
    pub mean: f64,
    pub precision: f64,
}

impl GaussianBelief {
    pub fn new(mean: f64, precision: f64) -> Self {
        debug_assert!(precision > 0.0, "precision must be positive");
        Self { mean, precision }
    }

    #[inline]
    pub fn sd(&self) -> f64 {
        self.precision.recip().sqrt()
    }

    #[inline]
    pub fn standardize(&self, t: f64) -> f64 {
        (t - self.mean) * self.precision.sqrt()
    }

    pub fn pdf(&self, t: f64) -> f64 {
        self.precision.sqrt() * normal::pdf(self.standardize(t))
    }

    pub fn cdf(&self, t: f64) -> f64 {
        normal::cdf(self.standardize(t))
    }

    /// `1 - F(t)`.
    pub fn sf(&self, t: f64) -> f64 {
        normal::sf(self.standardize(t))
    }

    /// `F(hi) - F(lo)`, accurate in either tail.
    pub fn interval_prob(&self, lo: f64, hi: f64) -> f64 {
        normal::interval_prob(self.standardize(lo), self.standardize(hi))
    }

    /// `E[t | lo ≤ t ≤ hi]`.
    pub fn interval_mean(&self, lo: f64, hi: f64) -> f64 {
        self.mean + self.sd() * normal::truncated_mean(self.standardize(lo), self.standardize(hi))
    }
}

/// Posterior of θ after the sender's signal `y`.
pub fn posterior_theta_given_y(params: &ModelParams, y: f64) -> GaussianBelief {
    let h = params.precision_theta_given_y();
    GaussianBelief::new((params.alpha * y + params.gamma * params.mu) / h, h)
}

/// Posterior of θ after a receiver's signal `x` and the sender's signal `y`.
pub fn posterior_theta_given_xy(params: &ModelParams, x: f64, y: f64) -> GaussianBelief {
    let h = params.precision_theta_given_xy();
    GaussianBelief::new(
        (params.alpha * y + params.beta * x + params.gamma * params.mu) / h,
        h,
    )
}

/// Posterior of θ after a receiver's signal `x` alone.
pub fn posterior_theta_given_x(params: &ModelParams, x: f64) -> GaussianBelief {
    let h = params.beta + params.gamma;
    GaussianBelief::new((params.beta * x + params.gamma * params.mu) / h, h)
}

/// The sender's forecast of a receiver's signal given `y`.
pub fn predictive_x_given_y(params: &ModelParams, y: f64) -> GaussianBelief {
    let post = posterior_theta_given_y(params, y);
    GaussianBelief::new(post.mean, (params.beta.recip() + post.precision.recip()).recip())
}

/// A receiver's forecast of the sender's signal given their own `x`.
pub fn predictive_y_given_x(params: &ModelParams, x: f64) -> GaussianBelief {
    let post = posterior_theta_given_x(params, x);
    GaussianBelief::new(post.mean, (post.precision.recip() + params.alpha.recip()).recip())
}

/// Mean of `belief` truncated to `[lower, ∞)`.
///
/// Deep in the upper tail the Mills ratio is taken from its continued
/// fraction, so the result stays finite for every finite `lower`; only
/// `lower = +∞` yields `+∞`.
pub fn truncated_normal_mean(belief: &GaussianBelief, lower: f64) -> f64 {
    if lower == f64::INFINITY {
        return f64::INFINITY;
    }
    belief.mean + belief.sd() * normal::inverse_mills_ratio(belief.standardize(lower))
}
