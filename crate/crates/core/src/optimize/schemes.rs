// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Engine-specific optimizations: efficiency at maximum power under each
//! scheme, and maximization over the coherence parameter.

use serde::Serialize;

use crate::closed_forms::{power_low_t, power_strong_ht};
use crate::error::{Error, Result};
use crate::observables::power_closed_form;
use crate::params::{carnot, EngineParams};

use super::{
    maximize_1d, maximize_2d, maximize_constrained, Constraint, OptimizationResult, Scheme, TOL_1D,
    TOL_2D,
};

/// Which power expression is maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerModel {
    /// Exact steady-state power.
    Full,
    /// Strong drive, high temperature.
    StrongHt,
    /// Low temperature; depends on the scaled energies only.
    LowT,
}

impl PowerModel {
    pub const ALL: [PowerModel; 3] = [PowerModel::Full, PowerModel::StrongHt, PowerModel::LowT];

    pub fn name(self) -> &'static str {
        match self {
            PowerModel::Full => "full",
            PowerModel::StrongHt => "strong_ht",
            PowerModel::LowT => "low_t",
        }
    }

    pub fn parse(s: &str) -> Option<PowerModel> {
        let s = s.replace('-', "_");
        PowerModel::ALL.into_iter().find(|m| m.name() == s)
    }

    fn power(self, omega_c: f64, omega_h: f64, params: &EngineParams) -> f64 {
        let value = match self {
            PowerModel::Full => power_closed_form(&EngineParams {
                omega_c,
                omega_h,
                ..*params
            }),
            PowerModel::StrongHt => power_strong_ht(omega_c, omega_h, params),
            PowerModel::LowT => Ok(power_low_t(
                omega_c / params.t_c,
                omega_h / params.t_h,
                1.0 - params.t_c / params.t_h,
                params.t_h,
            )),
        };
        value.unwrap_or(f64::NEG_INFINITY)
    }
}

/// Frequency search box: ω_c ∈ (ε, ω_h), ω_h ∈ (ω_c, Ω_max).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyWindow {
    pub omega_min: f64,
    pub omega_max: f64,
}

impl FrequencyWindow {
    /// ε = 10⁻⁶ T_c and Ω_max = 50 T_h.
    pub fn for_params(params: &EngineParams) -> Self {
        FrequencyWindow {
            omega_min: 1e-6 * params.t_c,
            omega_max: 50.0 * params.t_h,
        }
    }

    fn contains(&self, omega_c: f64, omega_h: f64) -> bool {
        self.omega_min < omega_c && omega_c < omega_h && omega_h < self.omega_max
    }
}

/// Outcome of [`emp_numeric`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpResult {
    /// 1 − ω_c*/ω_h* at the optimum.
    pub efficiency: f64,
    pub omega_c: f64,
    pub omega_h: f64,
    pub optimum: OptimizationResult,
}

/// Efficiency at maximum power of `model` under `scheme`.
///
/// The free frequencies are searched inside [`FrequencyWindow::for_params`],
/// narrowed to the interval where the power is positive. Fixed frequencies
/// and constraint constants are taken from `params`. The low-temperature
/// model supports only the two-parameter scheme.
pub fn emp_numeric(params: &EngineParams, scheme: Scheme, model: PowerModel) -> Result<EmpResult> {
    let eta = carnot(params)?;
    let ratio = 1.0 - eta;
    let window = FrequencyWindow::for_params(params);
    let power = |wc: f64, wh: f64| model.power(wc, wh, params);
    let incompatible = || {
        Error::domain(format!(
            "scheme {} is not available for the {} power model",
            scheme.name(),
            model.name()
        ))
    };

    let (wc, wh, optimum) = match scheme {
        Scheme::FixedWh => {
            let wh = params.omega_h;
            if model == PowerModel::LowT {
                return Err(incompatible());
            }
            let lo = (ratio * wh).max(window.omega_min);
            let r = maximize_1d(|wc| power(wc, wh), lo, wh, TOL_1D)?;
            (r.argmax[0], wh, r)
        }
        Scheme::FixedWc => {
            let wc = params.omega_c;
            if model == PowerModel::LowT {
                return Err(incompatible());
            }
            let hi = (wc / ratio).min(window.omega_max);
            let r = maximize_1d(|wh| power(wc, wh), wc, hi, TOL_1D)?;
            (wc, r.argmax[0], r)
        }
        Scheme::SumConstraint | Scheme::ProductConstraint => {
            if model == PowerModel::LowT {
                return Err(incompatible());
            }
            let (c, lo) = if scheme == Scheme::SumConstraint {
                let k = params.omega_c + params.omega_h;
                (Constraint::Sum(k), ratio * k / (1.0 + ratio))
            } else {
                let k = params.omega_c * params.omega_h;
                (Constraint::Product(k), (ratio * k).sqrt())
            };
            let (default_lo, hi) = c.default_window();
            let r = maximize_constrained(power, c, (lo.max(default_lo), hi), TOL_1D)?;
            (r.argmax[0], r.argmax[1], r)
        }
        Scheme::TwoParam => match model {
            PowerModel::StrongHt => {
                return Err(Error::domain(
                    "the strong-drive power is homogeneous in the frequencies; two-parameter maximization is unbounded",
                ))
            }
            PowerModel::LowT => {
                let objective = |x: f64, y: f64| {
                    if x > 0.0 && y > 0.0 {
                        power_low_t(x, y, eta, params.t_h)
                    } else {
                        f64::NEG_INFINITY
                    }
                };
                let r = maximize_2d(objective, [2.5, 2.0], 0.25, TOL_2D)?;
                let (x, y) = (r.argmax[0], r.argmax[1]);
                (x * params.t_c, y * params.t_h, r)
            }
            PowerModel::Full => {
                // start near the equilibrium optimum: y ≈ 2.5 and ω_c/ω_h ≈ 1 − η/2
                let y = 2.5;
                let x = y * (1.0 - 0.5 * eta) / ratio;
                let objective = |wc: f64, wh: f64| {
                    if window.contains(wc, wh) {
                        power(wc, wh)
                    } else {
                        f64::NEG_INFINITY
                    }
                };
                let r = maximize_2d(objective, [x * params.t_c, y * params.t_h], 0.25 * params.t_c, TOL_2D)?;
                (r.argmax[0], r.argmax[1], r)
            }
        },
        Scheme::OverP => {
            if model == PowerModel::LowT {
                return Err(incompatible());
            }
            let r = maximize_1d(|p| power_model_at_p(model, params, p), -1.0, 1.0, TOL_1D)?;
            (params.omega_c, params.omega_h, r)
        }
    };

    Ok(EmpResult {
        efficiency: 1.0 - wc / wh,
        omega_c: wc,
        omega_h: wh,
        optimum: optimum.with_scheme(scheme),
    })
}

fn power_model_at_p(model: PowerModel, params: &EngineParams, p: f64) -> f64 {
    model.power(params.omega_c, params.omega_h, &params.with_p(p))
}

/// Maximizes the steady-state power over p ∈ [-1, 1] at fixed frequencies.
pub fn optimize_over_p(params: &EngineParams) -> Result<OptimizationResult> {
    power_closed_form(params)?;
    let r = maximize_1d(
        |p| power_closed_form(&params.with_p(p)).unwrap_or(f64::NEG_INFINITY),
        -1.0,
        1.0,
        TOL_1D,
    )?;
    Ok(r.with_scheme(Scheme::OverP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{emp_fixed_wh, emp_low_t, low_t_optimum, optimal_p};

    #[test]
    fn low_t_two_parameter_optimum() {
        let params = EngineParams::emp_curve_defaults(0.0).with_carnot(0.4);
        let r = emp_numeric(&params, Scheme::TwoParam, PowerModel::LowT).unwrap();
        let (x, y) = low_t_optimum(0.4);
        assert!((r.omega_c / params.t_c - x).abs() < 1e-6);
        assert!((r.omega_h / params.t_h - y).abs() < 1e-6);
        assert!((r.efficiency - emp_low_t(0.4)).abs() < 1e-8);
        assert_eq!(r.optimum.scheme, Some(Scheme::TwoParam));
    }

    #[test]
    fn strong_drive_fixed_wh_matches_closed_form() {
        let params = EngineParams::emp_curve_defaults(0.4).with_carnot(0.3);
        let r = emp_numeric(&params, Scheme::FixedWh, PowerModel::StrongHt).unwrap();
        assert!((r.efficiency - emp_fixed_wh(0.3, &params).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn over_p_matches_optimal_p() {
        let params = EngineParams::power_curve_defaults(0.2, 0.0);
        let r = optimize_over_p(&params).unwrap();
        let opt = optimal_p(&params).unwrap();
        assert!(opt.is_interior());
        assert!((r.argmax[0] - opt.value).abs() < 1e-6);
    }

    #[test]
    fn full_two_parameter_near_equilibrium_leading_term() {
        let params = EngineParams::power_curve_defaults(0.2, 0.0).with_carnot(0.05);
        let r = emp_numeric(&params, Scheme::TwoParam, PowerModel::Full).unwrap();
        assert!((r.efficiency / 0.05 - 0.5).abs() < 2e-2);
        assert!(r.efficiency < 0.05);
    }

    #[test]
    fn incompatible_combinations_are_rejected() {
        let params = EngineParams::emp_curve_defaults(0.0).with_carnot(0.2);
        assert!(emp_numeric(&params, Scheme::FixedWh, PowerModel::LowT).is_err());
        assert!(emp_numeric(&params, Scheme::TwoParam, PowerModel::StrongHt).is_err());
    }

    #[test]
    fn emp_never_exceeds_carnot() {
        let params = EngineParams::power_curve_defaults(0.3, 0.2).with_carnot(0.3);
        for scheme in [
            Scheme::FixedWh,
            Scheme::FixedWc,
            Scheme::SumConstraint,
            Scheme::ProductConstraint,
        ] {
            for model in [PowerModel::Full, PowerModel::StrongHt] {
                let r = emp_numeric(&params, scheme, model).unwrap();
                assert!(
                    r.efficiency > 0.0 && r.efficiency < 0.3,
                    "{scheme:?} {model:?}"
                );
            }
        }
    }
}
