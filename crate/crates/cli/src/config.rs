use std::path::{Path, PathBuf};

use serde::Deserialize;

use disclosure::{ModelParams, SolverConfig};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ModelParams,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub figure: FigureConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Sender-signal grid for `figure`. An explicit `y_grid` wins over the
/// `y_min`/`y_max`/`points` range; with neither, the range is chosen to
/// cover the equilibrium interval with a margin.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FigureConfig {
    pub y_grid: Option<Vec<f64>>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub points: usize,
    /// Add the interval bounds themselves as grid rows.
    pub include_bounds: bool,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            y_grid: None,
            y_min: None,
            y_max: None,
            points: 401,
            include_bounds: true,
        }
    }
}

/// Bias grid for `sweep`; without `b_grid` or a range it spans `[−|r|, |r|]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub b_grid: Option<Vec<f64>>,
    pub b_min: Option<f64>,
    pub b_max: Option<f64>,
    pub points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            b_grid: None,
            b_min: None,
            b_max: None,
            points: 41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub draws: usize,
    pub receivers_per_draw: usize,
    pub seed: u64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            draws: 100_000,
            receivers_per_draw: disclosure::monte_carlo::DEFAULT_RECEIVERS_PER_DRAW,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
}

fn invalid(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid config `{field}`: {reason}"))
}

fn check_grid(field: &str, grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(invalid(field, "must be finite"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(field, "must be strictly increasing"));
    }
    Ok(())
}

fn check_range(section: &str, lo: Option<f64>, hi: Option<f64>, points: usize) -> Result<(), CliError> {
    let (lo_name, hi_name) = match section {
        "figure" => ("figure.y_min", "figure.y_max"),
        _ => ("sweep.b_min", "sweep.b_max"),
    };
    match (lo, hi) {
        (None, None) => {}
        (Some(_), None) => return Err(invalid(hi_name, "required when the lower end is set")),
        (None, Some(_)) => return Err(invalid(lo_name, "required when the upper end is set")),
        (Some(a), Some(b)) => {
            if !a.is_finite() || !b.is_finite() {
                return Err(invalid(lo_name, "range ends must be finite"));
            }
            if b <= a {
                return Err(invalid(hi_name, format!("must exceed {lo_name}")));
            }
        }
    }
    if points < 2 {
        return Err(invalid(&format!("{section}.points"), "must be at least 2"));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let de = toml::Deserializer::parse(text)
            .map_err(|e| CliError::Usage(format!("invalid config: {}", e.message())))?;
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let message = e.into_inner().message().to_string();
            if path == "." {
                CliError::Usage(format!("invalid config: {message}"))
            } else {
                CliError::Usage(format!("invalid config `{path}`: {message}"))
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Err(disclosure::Error::InvalidParam { field, reason }) = self.params.validate() {
            return Err(invalid(&format!("params.{field}"), reason));
        }
        let s = &self.solver;
        for (name, v) in [
            ("solver.x_tol", s.x_tol),
            ("solver.y_tol", s.y_tol),
            ("solver.residual_tol", s.residual_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, "must be positive and finite"));
            }
        }
        if s.max_iter == 0 {
            return Err(invalid("solver.max_iter", "must be at least 1"));
        }
        if s.scan_points < 2 {
            return Err(invalid("solver.scan_points", "must be at least 2"));
        }

        if let Some(grid) = &self.figure.y_grid {
            check_grid("figure.y_grid", grid)?;
        }
        check_range("figure", self.figure.y_min, self.figure.y_max, self.figure.points)?;
        if let Some(grid) = &self.sweep.b_grid {
            check_grid("sweep.b_grid", grid)?;
        }
        check_range("sweep", self.sweep.b_min, self.sweep.b_max, self.sweep.points)?;

        if self.simulate.draws == 0 {
            return Err(invalid("simulate.draws", "must be at least 1"));
        }
        if self.simulate.receivers_per_draw == 0 {
            return Err(invalid("simulate.receivers_per_draw", "must be at least 1"));
        }
        if let Some(path) = &self.output.path {
            check_writable("output.path", path)?;
        }
        Ok(())
    }
}

/// The output's parent directory must exist and the path must not be a
/// directory.
pub fn check_writable(field: &str, path: &Path) -> Result<(), CliError> {
    if path.is_dir() {
        return Err(invalid(field, format!("{} is a directory", path.display())));
    }
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(invalid(
            field,
            format!("directory {} does not exist", parent.display()),
        ));
    }
    Ok(())
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}
