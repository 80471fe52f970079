use std::path::PathBuf;

use clap::{Parser, Subcommand};

use disclosure::continuation::{conflict_of_interests, disclosed_threshold, sender_optimal_threshold};
use disclosure::monte_carlo::simulate;
use disclosure::welfare::{
    bias_sweep, default_bias_grid, ex_ante_aggregate_action, ex_ante_welfare, interim_gain_curve,
    welfare_decomposition,
};
use disclosure::{solve_equilibrium, Equilibrium};

use crate::config::{check_writable, linspace, RunConfig};
use crate::output::{figure_csv, sweep_csv, SimulateSummary, SolveSummary};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "disclosure",
    version,
    about = "Solve, sweep and simulate the disclosure game"
)]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file; overrides `[output] path`. Standard output if neither is set.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Simulation seed; overrides `[simulate] seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps and simulations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve the equilibrium and its welfare decomposition.
    Solve,
    /// Per-signal interim gains from concealment, as CSV.
    Figure,
    /// Equilibrium and welfare over a grid of sender biases, as CSV.
    Sweep,
    /// Simulate the game and compare with the analytic values.
    Simulate,
}

/// What a command produced, and whether it should still fail the process
/// after the output is written.
pub struct Report {
    pub text: String,
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config <PATH> is required".into()))?;
    let mut config = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        config.simulate.seed = seed;
    }
    if let Some(out) = &cli.out {
        check_writable("--out", out)?;
        config.output.path = Some(out.clone());
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // an already-built global pool is fine; results do not depend on it
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let report = execute(cli.command, &config)?;
    match &config.output.path {
        Some(out) => std::fs::write(out, &report.text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", out.display())))?,
        None => print!("{}", report.text),
    }
    report.failure.map_or(Ok(()), Err)
}

pub fn execute(command: Command, config: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Solve => solve(config),
        Command::Figure => figure(config),
        Command::Sweep => sweep(config),
        Command::Simulate => simulate_cmd(config),
    }
}

fn solve_converged(config: &RunConfig) -> Result<Equilibrium, CliError> {
    let eq = solve_equilibrium(&config.params, &config.solver)?;
    if !eq.converged {
        return Err(CliError::Numerical(not_converged(&eq)));
    }
    Ok(eq)
}

fn not_converged(eq: &Equilibrium) -> String {
    let r = eq.residuals;
    format!(
        "equilibrium did not converge: residuals marginal_receiver={:e} matching={:e} indifference={:e}",
        r.marginal_receiver, r.matching, r.indifference
    )
}

pub fn summarize(config: &RunConfig, eq: &Equilibrium) -> Result<SolveSummary, CliError> {
    let p = &config.params;
    let welfare = if eq.converged {
        Some(welfare_decomposition(p, eq)?)
    } else {
        None
    };
    let receiver_intercept = disclosed_threshold(p, 0.0);
    let sender_intercept = sender_optimal_threshold(p, 0.0);
    Ok(SolveSummary {
        bayes_form: config.solver.bayes_form,
        converged: eq.converged,
        x_empty: eq.x_empty,
        y1: eq.interval.y1,
        y2: eq.interval.y2,
        matching_bound: eq.bounds.matching,
        indifference_bound: eq.bounds.indifference,
        residual_marginal_receiver: eq.residuals.marginal_receiver,
        residual_matching: eq.residuals.matching,
        residual_indifference: eq.residuals.indifference,
        iterations: eq.iterations,
        other_roots: eq.other_roots.len(),
        delta: conflict_of_interests(p),
        receiver_intercept,
        receiver_slope: -p.alpha / p.beta,
        sender_intercept,
        sender_slope: -p.alpha / p.beta,
        welfare,
    })
}

fn solve(config: &RunConfig) -> Result<Report, CliError> {
    let eq = solve_equilibrium(&config.params, &config.solver)?;
    let summary = summarize(config, &eq)?;
    Ok(Report {
        text: summary.to_record().render(),
        failure: (!eq.converged).then(|| CliError::Numerical(not_converged(&eq))),
    })
}

/// Grid rows for `figure`, sorted, with the interval bounds added when asked.
pub fn figure_grid(config: &RunConfig, eq: &Equilibrium) -> Vec<f64> {
    let f = &config.figure;
    let mut grid = match (&f.y_grid, f.y_min, f.y_max) {
        (Some(grid), _, _) => grid.clone(),
        (None, Some(lo), Some(hi)) => linspace(lo, hi, f.points),
        _ => {
            let p = &config.params;
            let sd = p.marginal_y().sd();
            let lo = eq.interval.y1.min(p.mu - 4.0 * sd) - sd;
            let hi = eq.interval.y2.max(p.mu + 4.0 * sd) + sd;
            linspace(lo, hi, f.points)
        }
    };
    if f.include_bounds {
        grid.extend([eq.interval.y1, eq.interval.y2]);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    }
    grid
}

fn figure(config: &RunConfig) -> Result<Report, CliError> {
    let eq = solve_converged(config)?;
    let grid = figure_grid(config, &eq);
    let curve = interim_gain_curve(&config.params, &eq, &grid);
    Ok(Report::ok(figure_csv(&curve)))
}

pub fn bias_grid(config: &RunConfig) -> Vec<f64> {
    let s = &config.sweep;
    match (&s.b_grid, s.b_min, s.b_max) {
        (Some(grid), _, _) => grid.clone(),
        (None, Some(lo), Some(hi)) => linspace(lo, hi, s.points),
        _ => default_bias_grid(config.params.r, s.points),
    }
}

fn sweep(config: &RunConfig) -> Result<Report, CliError> {
    let points = bias_sweep(&config.params, &bias_grid(config), &config.solver);
    Ok(Report::ok(sweep_csv(&points)))
}

fn simulate_cmd(config: &RunConfig) -> Result<Report, CliError> {
    let eq = solve_converged(config)?;
    let p = &config.params;
    let s = &config.simulate;
    let outcome = simulate(p, &eq, s.draws, s.receivers_per_draw, s.seed);
    let summary = SimulateSummary {
        outcome,
        analytic_welfare: ex_ante_welfare(p, &eq)?,
        analytic_aggregate_action: ex_ante_aggregate_action(p, &eq)?,
    };
    Ok(Report::ok(summary.to_record().render()))
}
