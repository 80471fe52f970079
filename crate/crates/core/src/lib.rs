//! Communication equilibrium of a sender–receivers disclosure game with
//! payoff externalities.
//!
//! A sender who is informed with probability `p` may conceal the signal;
//! receivers play threshold strategies and their actions feed back into
//! each other's payoffs through the externality `r`. The crate solves the
//! equilibrium, evaluates ex-ante welfare and its decomposition, sweeps the
//! sender's bias `b`, and simulates the game as an independent check.

pub mod beliefs;
pub mod continuation;
pub mod equilibrium;
pub mod error;
pub mod monte_carlo;
pub mod normal;
pub mod payoff;
pub mod quadrature;
pub mod roots;
pub mod welfare;

pub use beliefs::{GaussianBelief, ModelParams};
pub use continuation::{BayesForm, Message, NonDisclosureInterval, ThresholdRule};
pub use equilibrium::{solve_equilibrium, Equilibrium, SolverConfig};
pub use error::{Error, Result};
