// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic derivative-free maximization.
//!
//! [`maximize_1d`] is a golden-section search seeded from a coarse audit
//! grid, [`maximize_2d`] is a Nelder-Mead simplex with one confirming restart
//! and [`maximize_constrained`] reduces a two-variable problem to one
//! variable through a sum or product constraint. The engine-specific schemes
//! built on top of them live in [`emp_numeric`] and [`optimize_over_p`].

mod golden;
mod schemes;
mod simplex;

use serde::Serialize;

pub use golden::{maximize_1d, AUDIT_POINTS};
pub use schemes::{emp_numeric, optimize_over_p, EmpResult, FrequencyWindow, PowerModel};
pub use simplex::{maximize_2d, maximize_2d_with_budget, DEFAULT_BUDGET};

use crate::error::{Error, Result};

/// Default bracket width for [`maximize_1d`].
pub const TOL_1D: f64 = 1e-10;
/// Default simplex diameter for [`maximize_2d`].
pub const TOL_2D: f64 = 1e-8;

/// Which optimization produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Maximize over ω_c with ω_h held fixed.
    FixedWh,
    /// Maximize over ω_h with ω_c held fixed.
    FixedWc,
    /// Maximize over both frequencies.
    TwoParam,
    /// ω_c + ω_h = k.
    SumConstraint,
    /// ω_c ω_h = k.
    ProductConstraint,
    /// Maximize over the coherence parameter.
    OverP,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::FixedWh,
        Scheme::FixedWc,
        Scheme::TwoParam,
        Scheme::SumConstraint,
        Scheme::ProductConstraint,
        Scheme::OverP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::FixedWh => "fixed_wh",
            Scheme::FixedWc => "fixed_wc",
            Scheme::TwoParam => "two_param",
            Scheme::SumConstraint => "sum_constraint",
            Scheme::ProductConstraint => "product_constraint",
            Scheme::OverP => "over_p",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        let s = s.replace('-', "_");
        Scheme::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub argmax: Vec<f64>,
    pub max_value: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub scheme: Option<Scheme>,
    /// Non-fatal findings, e.g. a multimodal audit grid.
    pub warnings: Vec<String>,
}

impl OptimizationResult {
    pub(crate) fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = Some(scheme);
        self
    }
}

/// Equality constraint between the two frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// ω_c + ω_h = k.
    Sum(f64),
    /// ω_c ω_h = k.
    Product(f64),
}

impl Constraint {
    /// ω_h for a given ω_c on the constraint.
    pub fn partner(self, omega_c: f64) -> f64 {
        match self {
            Constraint::Sum(k) => k - omega_c,
            Constraint::Product(k) => k / omega_c,
        }
    }

    /// ω_c window on which ω_h > ω_c > 0.
    pub fn default_window(self) -> (f64, f64) {
        match self {
            Constraint::Sum(k) => (1e-9 * k, 0.5 * k),
            Constraint::Product(k) => (1e-9 * k.sqrt(), k.sqrt()),
        }
    }

    fn check(self, lo: f64, hi: f64) -> Result<()> {
        let (k, kind) = match self {
            Constraint::Sum(k) => (k, "sum"),
            Constraint::Product(k) => (k, "product"),
        };
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::domain(format!(
                "{kind} constraint needs k > 0 (got {k})"
            )));
        }
        if !(lo > 0.0 && lo < hi && self.partner(hi) > 0.0) {
            return Err(Error::domain(format!(
                "infeasible omega_c window [{lo}, {hi}] for {kind} constraint k = {k}"
            )));
        }
        Ok(())
    }
}

/// Maximizes `objective(ω_c, ω_h)` along a constraint, over `ω_c` in
/// `window`. The returned argmax is `[ω_c, ω_h]`.
pub fn maximize_constrained<F>(
    objective: F,
    constraint: Constraint,
    window: (f64, f64),
    tol: f64,
) -> Result<OptimizationResult>
where
    F: Fn(f64, f64) -> f64,
{
    let (lo, hi) = window;
    constraint.check(lo, hi)?;
    let mut res = maximize_1d(|wc| objective(wc, constraint.partner(wc)), lo, hi, tol)?;
    let wc = res.argmax[0];
    res.argmax = vec![wc, constraint.partner(wc)];
    let scheme = match constraint {
        Constraint::Sum(_) => Scheme::SumConstraint,
        Constraint::Product(_) => Scheme::ProductConstraint,
    };
    Ok(res.with_scheme(scheme))
}
