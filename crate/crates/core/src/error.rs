// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::optimize::OptimizationResult;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The reduced linear system is singular or too ill-conditioned to trust.
    #[error("steady-state solver failed at {point}: {reason}")]
    Solver { point: String, reason: String },

    /// The Liouvillian has more than one stationary state.
    #[error("degenerate steady state at {point}: {reason}")]
    DegenerateSteadyState { point: String, reason: String },

    /// Fixed-step integration drifted away from the set of density matrices.
    #[error("integration left the state space at t = {time} (defect {defect:.3e}); try a smaller step than {step}")]
    StepSize { time: f64, step: f64, defect: f64 },

    /// A state produced an observable that should be real but is not.
    #[error("inconsistent state: {0}")]
    InconsistentState(String),

    /// Sign scan for the near-equilibrium operating point found no crossing.
    #[error("no root of the operating-point equation on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    /// A closed-form coefficient has a vanishing denominator.
    #[error("singular formula: {0}")]
    SingularFormula(String),

    /// The optimizer exhausted its budget; carries the best point found.
    #[error("optimizer did not converge after {} evaluations", best.evaluations)]
    NotConverged { best: Box<OptimizationResult> },

    /// One point of an efficiency grid failed; wraps the underlying cause.
    #[error("at eta_c = {eta_c}: {source}")]
    AtCarnot {
        eta_c: f64,
        #[source]
        source: Box<Error>,
    },

    /// Bad command-line or config-file input.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}
