//! Result files and CSV tables.
//!
//! Result files are flat `key=value` lines. Floats are written with 17
//! significant digits, which is enough to parse back to the identical
//! `f64`; a missing value is written as `NA`.

use std::fmt::Write as _;

use disclosure::monte_carlo::SimOutcome;
use disclosure::welfare::{InterimGainCurve, SweepPoint, WelfareReport};
use disclosure::BayesForm;

use crate::CliError;

pub const ABSENT: &str = "NA";

pub fn fmt_f64(x: f64) -> String {
    // adding zero folds -0 into 0
    format!("{:.16e}", x + 0.0)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| ABSENT.to_string(), fmt_f64)
}

/// An ordered list of `key=value` entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    entries: Vec<(String, String)>,
}

impl Record {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    pub fn push_opt(&mut self, key: &str, value: Option<f64>) {
        self.push(key, fmt_opt(value));
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut record = Record::default();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key=value", n + 1)))?;
            record.push(k.trim(), v.trim());
        }
        Ok(record)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Usage(format!("missing key `{key}`")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| CliError::Usage(format!("key `{key}`: cannot parse `{raw}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        self.parsed(key)
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.require(key)? {
            ABSENT => Ok(None),
            _ => self.f64(key).map(Some),
        }
    }
}

/// The `solve` result.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveSummary {
    pub bayes_form: BayesForm,
    pub converged: bool,
    pub x_empty: f64,
    pub y1: f64,
    pub y2: f64,
    pub matching_bound: f64,
    pub indifference_bound: f64,
    pub residual_marginal_receiver: f64,
    pub residual_matching: f64,
    pub residual_indifference: f64,
    pub iterations: usize,
    pub other_roots: usize,
    /// `Δ = x̂(y) − x*(y)`, the receiver/sender threshold gap.
    pub delta: f64,
    /// `x̂(y) = receiver_intercept + receiver_slope · y`.
    pub receiver_intercept: f64,
    pub receiver_slope: f64,
    /// `x*(y) = sender_intercept + sender_slope · y`.
    pub sender_intercept: f64,
    pub sender_slope: f64,
    /// Present only for a converged solve.
    pub welfare: Option<WelfareReport>,
}

impl SolveSummary {
    pub fn to_record(&self) -> Record {
        let mut r = Record::default();
        r.push("command", "solve");
        r.push("bayes_form", self.bayes_form);
        r.push("converged", self.converged);
        r.push_f64("x_empty", self.x_empty);
        r.push_f64("y1", self.y1);
        r.push_f64("y2", self.y2);
        r.push_f64("matching_bound", self.matching_bound);
        r.push_f64("indifference_bound", self.indifference_bound);
        r.push_f64("residual_marginal_receiver", self.residual_marginal_receiver);
        r.push_f64("residual_matching", self.residual_matching);
        r.push_f64("residual_indifference", self.residual_indifference);
        r.push("iterations", self.iterations);
        r.push("other_roots", self.other_roots);
        r.push_f64("delta", self.delta);
        r.push_f64("receiver_intercept", self.receiver_intercept);
        r.push_f64("receiver_slope", self.receiver_slope);
        r.push_f64("sender_intercept", self.sender_intercept);
        r.push_f64("sender_slope", self.sender_slope);
        if let Some(w) = &self.welfare {
            r.push_f64("v_total", w.v_total);
            r.push_f64("v_full_disclosure", w.v_full_disclosure);
            r.push_f64("misinterpretation_gain", w.misinterpretation_gain);
            r.push_f64("concealment_gain_total", w.concealment_gain_total);
            r.push_f64("identity_residual", w.identity_residual);
        }
        r
    }

    pub fn from_record(r: &Record) -> Result<Self, CliError> {
        let welfare = if r.get("v_total").is_some() {
            Some(WelfareReport {
                v_total: r.f64("v_total")?,
                v_full_disclosure: r.f64("v_full_disclosure")?,
                misinterpretation_gain: r.f64("misinterpretation_gain")?,
                concealment_gain_total: r.f64("concealment_gain_total")?,
                identity_residual: r.f64("identity_residual")?,
            })
        } else {
            None
        };
        Ok(Self {
            bayes_form: r.parsed("bayes_form")?,
            converged: r.parsed("converged")?,
            x_empty: r.f64("x_empty")?,
            y1: r.f64("y1")?,
            y2: r.f64("y2")?,
            matching_bound: r.f64("matching_bound")?,
            indifference_bound: r.f64("indifference_bound")?,
            residual_marginal_receiver: r.f64("residual_marginal_receiver")?,
            residual_matching: r.f64("residual_matching")?,
            residual_indifference: r.f64("residual_indifference")?,
            iterations: r.parsed("iterations")?,
            other_roots: r.parsed("other_roots")?,
            delta: r.f64("delta")?,
            receiver_intercept: r.f64("receiver_intercept")?,
            receiver_slope: r.f64("receiver_slope")?,
            sender_intercept: r.f64("sender_intercept")?,
            sender_slope: r.f64("sender_slope")?,
            welfare,
        })
    }
}

/// The `simulate` result: the simulation, the analytic values it estimates,
/// and z-scores (absent when there is no standard error).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSummary {
    pub outcome: SimOutcome,
    pub analytic_welfare: f64,
    pub analytic_aggregate_action: f64,
}

impl SimulateSummary {
    fn z(sim: f64, exact: f64, se: Option<f64>) -> Option<f64> {
        se.filter(|s| *s > 0.0).map(|s| (sim - exact) / s)
    }

    pub fn z_welfare(&self) -> Option<f64> {
        Self::z(
            self.outcome.mean_welfare,
            self.analytic_welfare,
            self.outcome.se_welfare,
        )
    }

    pub fn z_action(&self) -> Option<f64> {
        Self::z(
            self.outcome.mean_aggregate_action,
            self.analytic_aggregate_action,
            self.outcome.se_action,
        )
    }

    pub fn to_record(&self) -> Record {
        let o = &self.outcome;
        let mut r = Record::default();
        r.push("command", "simulate");
        r.push("seed", o.seed);
        r.push("draws", o.draws);
        r.push("receivers_per_draw", o.receivers_per_draw);
        r.push_f64("mean_welfare", o.mean_welfare);
        r.push_opt("se_welfare", o.se_welfare);
        r.push_f64("analytic_welfare", self.analytic_welfare);
        r.push_opt("z_welfare", self.z_welfare());
        r.push_f64("mean_aggregate_action", o.mean_aggregate_action);
        r.push_opt("se_action", o.se_action);
        r.push_f64("analytic_aggregate_action", self.analytic_aggregate_action);
        r.push_opt("z_action", self.z_action());
        r
    }

    pub fn from_record(r: &Record) -> Result<Self, CliError> {
        Ok(Self {
            outcome: SimOutcome {
                mean_welfare: r.f64("mean_welfare")?,
                se_welfare: r.opt_f64("se_welfare")?,
                mean_aggregate_action: r.f64("mean_aggregate_action")?,
                se_action: r.opt_f64("se_action")?,
                draws: r.parsed("draws")?,
                receivers_per_draw: r.parsed("receivers_per_draw")?,
                seed: r.parsed("seed")?,
            },
            analytic_welfare: r.f64("analytic_welfare")?,
            analytic_aggregate_action: r.f64("analytic_aggregate_action")?,
        })
    }
}

pub const FIGURE_HEADER: &str = "y,sender_gain,aggregate_action_gain,welfare_gain,in_interval";

pub fn figure_csv(curve: &InterimGainCurve) -> String {
    let mut out = String::from(FIGURE_HEADER);
    out.push('\n');
    for i in 0..curve.y_grid.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(curve.y_grid[i]),
            fmt_f64(curve.sender_gain[i]),
            fmt_f64(curve.aggregate_action_gain[i]),
            fmt_f64(curve.welfare_gain[i]),
            u8::from(curve.in_interval[i])
        );
    }
    out
}

pub const SWEEP_HEADER: &str = "b,status,x_empty,y1,y2,width,max_residual,v_total,v_full_disclosure,\
misinterpretation_gain,concealment_gain_total,identity_residual";

/// One row per bias; failed points keep their row with the error kind in
/// `status` and empty numeric fields.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for point in points {
        match &point.outcome {
            Ok((eq, w)) => {
                let fields = [
                    eq.x_empty,
                    eq.interval.y1,
                    eq.interval.y2,
                    eq.interval.width(),
                    eq.residuals.max_abs(),
                    w.v_total,
                    w.v_full_disclosure,
                    w.misinterpretation_gain,
                    w.concealment_gain_total,
                    w.identity_residual,
                ];
                let joined: Vec<String> = fields.iter().map(|v| fmt_f64(*v)).collect();
                let _ = writeln!(out, "{},ok,{}", fmt_f64(point.b), joined.join(","));
            }
            Err(e) => {
                let _ = writeln!(out, "{},{}{}", fmt_f64(point.b), e.kind(), ",".repeat(10));
            }
        }
    }
    out
}
