//! Full-game equilibrium `{x̂(∅), y1, y2}`.
//!
//! For a candidate silence threshold `x`, the interval bound where the
//! disclosed threshold meets `x` is closed form and the other bound is a
//! one-dimensional root of the sender's indifference condition. Feeding the
//! interval back into the marginal receiver's condition leaves one scalar
//! equation in `x`, which is solved by a grid scan plus Brent refinement.

use serde::{Deserialize, Serialize};

use crate::beliefs::ModelParams;
use crate::continuation::{
    disclosed_threshold, empty_message_condition, signal_inducing_threshold, BayesForm, Message,
    NonDisclosureInterval, ThresholdRule, BRACKET_PRIOR_SDS,
};
use crate::error::{Error, Result};
use crate::payoff::{concealment_gain_direct, indifference_factor};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub x_tol: f64,
    pub y_tol: f64,
    /// Bound on each of the three equilibrium residuals for `converged`.
    pub residual_tol: f64,
    pub max_iter: usize,
    pub scan_points: usize,
    pub bayes_form: BayesForm,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-10,
            y_tol: 1e-10,
            residual_tol: 1e-9,
            max_iter: 200,
            scan_points: 512,
            bayes_form: BayesForm::Standard,
        }
    }
}

/// Interval bounds for a fixed silence threshold, tagged by role.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalBounds {
    /// Signal whose disclosed threshold equals the silence threshold.
    pub matching: f64,
    /// Signal at which the sender is indifferent between the two thresholds.
    pub indifference: f64,
}

impl IntervalBounds {
    pub fn interval(&self) -> NonDisclosureInterval {
        NonDisclosureInterval::new(
            self.matching.min(self.indifference),
            self.matching.max(self.indifference),
        )
    }
}

/// Residuals of the three equilibrium conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `E[θ | x̂(∅), ∅]` (or its rescaled variant under [`BayesForm::PaperLiteral`]).
    pub marginal_receiver: f64,
    /// `x̂(y_matching) − x̂(∅)`.
    pub matching: f64,
    /// `Π(x̂(∅), y_indiff) − Π(x̂(y_indiff), y_indiff)`.
    pub indifference: f64,
}

impl Residuals {
    pub fn max_abs(&self) -> f64 {
        self.marginal_receiver
            .abs()
            .max(self.matching.abs())
            .max(self.indifference.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub x_empty: f64,
    pub interval: NonDisclosureInterval,
    pub bounds: IntervalBounds,
    pub residuals: Residuals,
    /// Evaluations of the collapsed equation, scan included.
    pub iterations: usize,
    pub converged: bool,
    /// Other roots of the collapsed equation found in the scan.
    pub other_roots: Vec<f64>,
}

impl Equilibrium {
    pub fn multiple_roots(&self) -> bool {
        !self.other_roots.is_empty()
    }

    pub fn threshold_rule(&self, params: &ModelParams) -> ThresholdRule {
        ThresholdRule::new(params, self.x_empty)
    }

    /// Threshold receivers play after `message`. A disclosed signal inside
    /// the interval is off the equilibrium path and taken at face value.
    pub fn receiver_threshold(&self, params: &ModelParams, message: Message) -> f64 {
        self.threshold_rule(params).threshold(message)
    }
}

/// Both interval bounds induced by silence threshold `x_empty`.
///
/// The matching bound is `−(β x_empty + γμ)/α`. The indifference bound lies
/// below it when `r + b > 0` and above it when `r + b < 0`.
pub fn interval_bounds_given_x(params: &ModelParams, x_empty: f64, y_tol: f64) -> Result<IntervalBounds> {
    let weight = params.total_weight();
    let matching = signal_inducing_threshold(params, x_empty);
    if weight == 0.0 {
        return Err(Error::DegenerateConflict);
    }
    let factor = |y: f64| indifference_factor(params, x_empty, y);
    let step = -weight.signum() * 0.1 * params.marginal_y().sd();
    let (lo, hi) = roots::expand_bracket(factor, matching, step, 80)?;
    let root = roots::brent(factor, lo, hi, y_tol, 200)?;
    Ok(IntervalBounds {
        matching,
        indifference: root.x,
    })
}

/// The non-disclosure interval induced by silence threshold `x_empty`.
pub fn interval_given_x(params: &ModelParams, x_empty: f64) -> Result<NonDisclosureInterval> {
    interval_bounds_given_x(params, x_empty, SolverConfig::default().y_tol).map(|b| b.interval())
}

/// The collapsed fixed-point equation: the silence-posterior condition at
/// `x` under the interval that `x` itself induces.
pub fn collapsed_condition(params: &ModelParams, x: f64, config: &SolverConfig) -> Result<f64> {
    let bounds = interval_bounds_given_x(params, x, config.y_tol)?;
    Ok(empty_message_condition(
        params,
        &bounds.interval(),
        x,
        config.bayes_form,
    ))
}

pub fn solve_equilibrium(params: &ModelParams, config: &SolverConfig) -> Result<Equilibrium> {
    params.validate()?;
    if params.total_weight() == 0.0 {
        return Err(Error::DegenerateConflict);
    }
    let n = config.scan_points.max(2);
    let mut evaluations = 0usize;
    let mut best_residual = f64::INFINITY;
    let eval = |x: f64| collapsed_condition(params, x, config).unwrap_or(f64::NAN);

    let center = params.mu;
    let mut half = BRACKET_PRIOR_SDS * params.prior_sd();
    let mut roots_found = Vec::new();
    for _ in 0..6 {
        let grid: Vec<f64> = (0..n)
            .map(|i| center - half + 2.0 * half * i as f64 / (n - 1) as f64)
            .collect();
        let values: Vec<f64> = grid.iter().map(|&x| eval(x)).collect();
        evaluations += n;
        best_residual = values
            .iter()
            .filter(|v| v.is_finite())
            .fold(best_residual, |acc, v| acc.min(v.abs()));

        for (j, i) in roots::sign_changes(&values) {
            let root = roots::brent(eval, grid[j], grid[i], config.x_tol, config.max_iter)?;
            evaluations += root.iterations;
            roots_found.push(root.x);
        }
        if !roots_found.is_empty() {
            break;
        }
        half *= 2.0;
    }

    if roots_found.is_empty() {
        return Err(Error::NoConvergence {
            iterations: evaluations,
            best_residual,
        });
    }

    let target = params.full_disclosure_threshold();
    roots_found.sort_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
    let x_empty = roots_found[0];
    let other_roots = roots_found[1..].to_vec();

    let bounds = interval_bounds_given_x(params, x_empty, config.y_tol)?;
    let interval = bounds.interval();
    let residuals = Residuals {
        marginal_receiver: empty_message_condition(params, &interval, x_empty, config.bayes_form),
        matching: disclosed_threshold(params, bounds.matching) - x_empty,
        indifference: concealment_gain_direct(params, x_empty, bounds.indifference),
    };
    Ok(Equilibrium {
        x_empty,
        interval,
        bounds,
        converged: residuals.max_abs() < config.residual_tol,
        residuals,
        iterations: evaluations,
        other_roots,
    })
}

/// The informed sender's message: silence strictly inside the interval,
/// truthful disclosure elsewhere. An uninformed sender is always silent.
pub fn disclosure_rule(eq: &Equilibrium, y: Option<f64>) -> Message {
    match y {
        Some(y) if !eq.interval.contains(y) => Message::Disclosed(y),
        _ => Message::Empty,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuation::empty_message_threshold;
    use crate::payoff::concealment_gain;

    fn helpful() -> ModelParams {
        ModelParams::new(2.0, 1.0, 1.0, 0.0, 2.0, -0.5, 0.8).unwrap()
    }

    fn harmful() -> ModelParams {
        ModelParams::new(1.0, 1.5, 1.0, 0.0, 0.5, 1.5, 0.8).unwrap()
    }

    #[test]
    fn matching_bound_is_closed_form() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 0.0, 2.0, 0.0, 0.5).unwrap();
        let b = interval_bounds_given_x(&p, 1.0, 1e-12).unwrap();
        assert_eq!(b.matching, -0.5);
        let b = interval_bounds_given_x(&helpful(), 0.0, 1e-12).unwrap();
        assert_eq!(b.matching, 0.0);
        assert!(b.indifference < 0.0);
    }

    #[test]
    fn degenerate_conflict_is_rejected() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 0.0, 0.5, -0.5, 0.5).unwrap();
        assert_eq!(interval_given_x(&p, 0.0), Err(Error::DegenerateConflict));
        assert_eq!(
            solve_equilibrium(&p, &SolverConfig::default()),
            Err(Error::DegenerateConflict)
        );
    }

    #[test]
    fn indifference_bound_side_follows_conflict_sign() {
        let up = ModelParams::new(1.0, 1.0, 1.0, 0.3, -1.0, 0.0, 0.5).unwrap();
        let b = interval_bounds_given_x(&up, 0.2, 1e-12).unwrap();
        assert!(b.indifference > b.matching);
        let y_mid = 0.5 * (b.indifference + b.matching);
        assert!(concealment_gain(&up, 0.2, y_mid) > 0.0);
    }

    #[test]
    fn figure_configs_converge() {
        for p in [helpful(), harmful()] {
            let eq = solve_equilibrium(&p, &SolverConfig::default()).unwrap();
            assert!(eq.converged, "{eq:?}");
            assert!(eq.residuals.max_abs() < 1e-8);
            assert!(eq.interval.y1 < eq.interval.y2);
            assert!(!eq.multiple_roots());
        }
    }

    #[test]
    fn fixed_point_is_self_consistent() {
        let p = helpful();
        let cfg = SolverConfig::default();
        let eq = solve_equilibrium(&p, &cfg).unwrap();
        let again = empty_message_threshold(&p, &eq.interval, cfg.bayes_form).unwrap();
        assert!((again - eq.x_empty).abs() < 1e-9);
    }

    #[test]
    fn nearly_uninformed_sender() {
        let p = ModelParams::new(1.5, 2.0, 0.8, 0.7, 1.0, 0.0, 1e-6).unwrap();
        let eq = solve_equilibrium(&p, &SolverConfig::default()).unwrap();
        assert!((eq.x_empty - p.full_disclosure_threshold()).abs() < 1e-5);
    }

    #[test]
    fn disclosure_rule_cases() {
        let eq = solve_equilibrium(&helpful(), &SolverConfig::default()).unwrap();
        let (y1, y2) = (eq.interval.y1, eq.interval.y2);
        assert_eq!(disclosure_rule(&eq, None), Message::Empty);
        assert_eq!(disclosure_rule(&eq, Some(y1 - 1.0)), Message::Disclosed(y1 - 1.0));
        assert_eq!(disclosure_rule(&eq, Some(0.5 * (y1 + y2))), Message::Empty);
        assert_eq!(disclosure_rule(&eq, Some(y2 + 0.1)), Message::Disclosed(y2 + 0.1));
    }

    #[test]
    fn paper_literal_form_also_converges() {
        let cfg = SolverConfig {
            bayes_form: BayesForm::PaperLiteral,
            ..SolverConfig::default()
        };
        let eq = solve_equilibrium(&helpful(), &cfg).unwrap();
        assert!(eq.converged, "{eq:?}");
    }
}
