// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Analytic results: matter fluxes, regime-limited powers, efficiencies at
//! maximum power and their expansions, and the optimal coherence parameter.
//!
//! Fluxes take scaled energies `x = ω_c/T_c` (first argument) and
//! `y = ω_h/T_h` (second argument), so that the power is `(ω_h − ω_c) I(x, y)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{carnot, require_valid, EngineParams};

/// Which matter flux `I(x, y)` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxKind {
    /// Exact flux of the driven engine.
    General,
    /// Leading high-temperature form (x, y ≪ 1).
    HighT,
    /// High temperature and λ much larger than the bath rates.
    StrongCouplingHighT,
    /// Low temperature, `e^{−y} − e^{−x}` up to a positive constant.
    LowT,
}

impl FluxKind {
    pub const ALL: [FluxKind; 4] = [
        FluxKind::General,
        FluxKind::HighT,
        FluxKind::StrongCouplingHighT,
        FluxKind::LowT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FluxKind::General => "general",
            FluxKind::HighT => "high_t",
            FluxKind::StrongCouplingHighT => "strong_coupling_high_t",
            FluxKind::LowT => "low_t",
        }
    }

    pub fn parse(s: &str) -> Option<FluxKind> {
        let s = s.replace('-', "_");
        FluxKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// The exponential-form denominator pieces of the general flux.
pub(crate) fn denominator_exp_form(x: f64, y: f64, params: &EngineParams) -> (f64, f64) {
    let (ex, ey) = (x.exp(), y.exp());
    let (mx, my) = (x.exp_m1(), y.exp_m1());
    let (g_c, g_h, q) = (params.gamma_c, params.gamma_h, 1.0 + params.p);
    let lam2 = params.lambda * params.lambda;
    let a = ey * (ex * ey + 2.0 * ex + ey) * (ex * my * g_c + q * ey * mx * g_h) * q * g_c * g_h;
    let b =
        8.0 * lam2 * mx * my * (my * ((ex + 2.0) * ey + ex) * g_c + q * ey * mx * (ey + 3.0) * g_h);
    (a, b)
}

/// Matter flux `I(x, y)` of the given kind.
///
/// `LowT` ignores `params`. Errors on non-positive scaled energies and on a
/// vanishing denominator.
pub fn flux(kind: FluxKind, x: f64, y: f64, params: &EngineParams) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::domain(format!(
            "flux needs x > 0 and y > 0 (got x={x}, y={y})"
        )));
    }
    let (g_c, g_h, q) = (params.gamma_c, params.gamma_h, 1.0 + params.p);
    let lam2 = params.lambda * params.lambda;
    let (num, den) = match kind {
        FluxKind::LowT => return Ok((-y).exp() - (-x).exp()),
        FluxKind::General => {
            let (a, b) = denominator_exp_form(x, y, params);
            // e^x − e^y written as e^y (e^{x−y} − 1) to keep the diagonal exact
            let num = 8.0
                * g_c
                * g_h
                * lam2
                * q
                * y.exp()
                * y.exp_m1()
                * y.exp()
                * (x - y).exp_m1()
                * x.exp_m1();
            (num, a + b)
        }
        FluxKind::HighT => (
            2.0 * lam2 * q * g_c * g_h * x * y * (x - y),
            (y * g_c + q * x * g_h) * (q * g_c * g_h + 8.0 * lam2 * x * y),
        ),
        FluxKind::StrongCouplingHighT => {
            ((x - y) * q * g_h * g_c, 4.0 * y * g_c + 4.0 * x * g_h * q)
        }
    };
    if num == 0.0 {
        return Ok(0.0);
    }
    if !(den != 0.0) || !num.is_finite() || !den.is_finite() {
        return Err(Error::domain(format!(
            "{} flux is singular at x={x}, y={y} ({})",
            kind.name(),
            params.describe()
        )));
    }
    Ok(num / den)
}

/// Low-temperature power `T_h [y − x(1 − η_C)] (e^{−y} − e^{−x})`, with the
/// rate-dependent prefactor set to one.
pub fn power_low_t(x: f64, y: f64, eta_c: f64, t_h: f64) -> f64 {
    t_h * (y - x * (1.0 - eta_c)) * ((-y).exp() - (-x).exp())
}

/// Power for strong drive at high temperature, as a function of the two
/// frequencies. The Carnot efficiency comes from `params`.
pub fn power_strong_ht(omega_c: f64, omega_h: f64, params: &EngineParams) -> Result<f64> {
    if !(omega_c > 0.0 && omega_h > 0.0) {
        return Err(Error::domain(format!(
            "power needs positive frequencies (got omega_c={omega_c}, omega_h={omega_h})"
        )));
    }
    let eta = carnot(params)?;
    let (g_c, g_h, q) = (params.gamma_c, params.gamma_h, 1.0 + params.p);
    let den = 4.0 * (1.0 - eta) * g_c * omega_h + 4.0 * q * g_h * omega_c;
    if den == 0.0 {
        return Err(Error::domain(format!(
            "strong-drive power denominator vanishes ({})",
            params.describe()
        )));
    }
    Ok((omega_h - omega_c) * (omega_c - (1.0 - eta) * omega_h) * q * g_h * g_c / den)
}

/// Efficiency at maximum low-temperature power,
/// `η_C² / (η_C − (1 − η_C) ln(1 − η_C))`.
pub fn emp_low_t(eta_c: f64) -> f64 {
    eta_c * eta_c / (eta_c - (1.0 - eta_c) * (-eta_c).ln_1p())
}

/// Optimal low-temperature scaled energies `(x, y)` at Carnot efficiency `eta_c`.
pub fn low_t_optimum(eta_c: f64) -> (f64, f64) {
    let l = (-eta_c).ln_1p();
    ((eta_c - l) / eta_c, (eta_c - (1.0 - eta_c) * l) / eta_c)
}

/// Second-order high-temperature efficiency at maximum power for
/// Γ_c = Γ_h: `η_C/2 + η_C² (1 + p) / (4 (2 + p))`.
pub fn emp_high_t_symmetric(eta_c: f64, p: f64) -> f64 {
    eta_c / 2.0 + eta_c * eta_c * (1.0 + p) / (4.0 * (2.0 + p))
}

/// Efficiency at maximum strong-drive power with ω_h held fixed.
pub fn emp_fixed_wh(eta_c: f64, params: &EngineParams) -> Result<f64> {
    let h = (1.0 + params.p) * params.gamma_h;
    if h == 0.0 {
        return Err(Error::domain(
            "fixed-omega_h efficiency is undefined at p = -1",
        ));
    }
    if !(eta_c > 0.0 && eta_c < 1.0) {
        return Err(Error::domain(format!("need 0 < eta_c < 1 (got {eta_c})")));
    }
    let g_c = params.gamma_c;
    let s = 1.0 - eta_c;
    // (a − √b)/h rationalized to avoid cancellation at small eta_c
    let a = h + g_c * s;
    let b = s * (g_c + h) * (s * g_c + h);
    Ok(eta_c * a / (a + b.sqrt()))
}

/// Coefficients of `η = c1 η_C + c2 η_C² + c3 η_C³ + …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: Option<f64>,
}

/// One-parameter schemes with a closed-form expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OneParameterScheme {
    FixedWh,
    FixedWc,
    SumConstraint,
}

/// Expansion of the strong-drive efficiency at maximum power.
pub fn taylor_one_parameter(
    scheme: OneParameterScheme,
    params: &EngineParams,
) -> Result<TaylorCoefficients> {
    let (g_c, h) = (params.gamma_c, (1.0 + params.p) * params.gamma_h);
    if !(h > 0.0) || !(g_c > 0.0) {
        return Err(Error::domain(format!(
            "expansion needs p > -1 and positive rates ({})",
            params.describe()
        )));
    }
    let s = g_c + h;
    let (c2, c3) = match scheme {
        OneParameterScheme::FixedWh => (h / (8.0 * s), h * (2.0 * g_c + h) / (16.0 * s * s)),
        OneParameterScheme::FixedWc => (
            (g_c + 2.0 * h) / (8.0 * s),
            (g_c * g_c + 4.0 * g_c * h + 2.0 * h * h) / (16.0 * s * s),
        ),
        OneParameterScheme::SumConstraint => (
            (g_c + 3.0 * h) / (16.0 * s),
            (g_c * g_c + 10.0 * g_c * h + 5.0 * h * h) / (64.0 * s * s),
        ),
    };
    Ok(TaylorCoefficients {
        c1: 0.5,
        c2,
        c3: Some(c3),
    })
}

/// Advice when the optimal coherence parameter leaves [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PBoundary {
    /// Power still grows at p = 1: operate near p = 1.
    NearOne,
    /// Power falls from p = -1 on: operate near p = -1.
    NearMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalP {
    /// Unclamped stationary point of the power in p.
    pub value: f64,
    /// `value` clamped to [-1, 1].
    pub clamped: f64,
    pub boundary: Option<PBoundary>,
}

impl OptimalP {
    fn new(value: f64) -> Self {
        let boundary = if value >= 1.0 {
            Some(PBoundary::NearOne)
        } else if value <= -1.0 {
            Some(PBoundary::NearMinusOne)
        } else {
            None
        };
        OptimalP {
            value,
            clamped: value.clamp(-1.0, 1.0),
            boundary,
        }
    }

    pub fn is_interior(&self) -> bool {
        self.boundary.is_none()
    }
}

/// Coherence parameter maximizing the steady-state power. The `p` field of
/// `params` is ignored.
pub fn optimal_p(params: &EngineParams) -> Result<OptimalP> {
    require_valid(params)?;
    let occ = params.occupations()?;
    let (n_c, n_h) = (occ.n_c, occ.n_h);
    let cold = 1.0 + 3.0 * n_c + 2.0 * n_h + 4.0 * n_c * n_h;
    let hot = 1.0 + 3.0 * n_h + 2.0 * n_c + 4.0 * n_c * n_h;
    let value = (8.0 * cold / hot).sqrt() * params.lambda / (params.gamma_h * (1.0 + n_h)) - 1.0;
    Ok(OptimalP::new(value))
}

/// High-temperature limit of [`optimal_p`] (both occupations large).
pub fn optimal_p_high_t(params: &EngineParams) -> Result<f64> {
    let n_h = params.occupations()?.n_h;
    Ok(8f64.sqrt() * params.lambda / (params.gamma_h * n_h) - 1.0)
}

/// Low-temperature limit of [`optimal_p`] (both occupations small).
pub fn optimal_p_low_t(params: &EngineParams) -> f64 {
    8f64.sqrt() * params.lambda / params.gamma_h - 1.0
}

/// Second-order coefficient `c2` of the near-equilibrium efficiency at
/// maximum power of the general flux, evaluated at the operating point
/// `alpha` returned by [`solve_alpha`](crate::universality::solve_alpha).
pub fn emp_near_equilibrium_coefficient(params: &EngineParams, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "alpha must be positive (got {alpha})"
        )));
    }
    let (g_c, g_h, q) = (params.gamma_c, params.gamma_h, 1.0 + params.p);
    let lam2 = params.lambda * params.lambda;
    let e = alpha.exp();
    let m = alpha.exp_m1();
    let den = (g_c + q * g_h)
        * (q * e * e * (e - 3.0) * (e + 1.0) * g_c * g_h + 8.0 * lam2 * m * m * (e * e + 3.0));
    let first = e * e * (m * m * g_c + q * (e - 5.0) * (e + 1.0) * g_h) * q * g_c * g_h;
    let second = 8.0 * lam2 * m * m * ((e * (e + 2.0) + 5.0) * g_c + q * (e - 3.0) * m * g_h);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::domain(format!(
            "near-equilibrium coefficient is singular at alpha={alpha} ({})",
            params.describe()
        )));
    }
    Ok((first + second) / den / 8.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{denominator_occupation_form, power_closed_form};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    fn sym(gamma: f64, lambda: f64, p: f64) -> EngineParams {
        EngineParams {
            gamma_c: gamma,
            gamma_h: gamma,
            ..EngineParams::power_curve_defaults(lambda, p)
        }
    }

    #[test]
    fn general_flux_times_gap_is_the_power() {
        for (lam, p) in [(0.1, 0.0), (0.2, 0.5), (1.3, -0.6)] {
            let base = EngineParams::power_curve_defaults(lam, p);
            let params = EngineParams {
                omega_c: 1.2 * base.t_c,
                omega_h: 0.8 * base.t_h,
                ..base
            };
            let i = flux(FluxKind::General, 1.2, 0.8, &params).unwrap();
            let pw = power_closed_form(&params).unwrap();
            assert!(rel(pw, (params.omega_h - params.omega_c) * i) < 1e-12);
        }
    }

    #[test]
    fn exponential_and_occupation_denominators_agree() {
        let params = EngineParams::power_curve_defaults(0.4, 0.3);
        for (x, y) in [(1.2, 0.8), (0.3, 2.5), (4.0, 4.0)] {
            let occ = crate::params::DimensionlessPoint { x, y }.occupations();
            let (a_exp, b_exp) = denominator_exp_form(x, y, &params);
            let (a_occ, b_occ) = denominator_occupation_form(&params, occ);
            let scale = y.exp_m1().powi(3) * x.exp_m1().powi(2);
            assert!(rel(a_exp, a_occ * scale) < 1e-12);
            assert!(rel(b_exp, b_occ * scale) < 1e-12);
        }
    }

    #[test]
    fn every_flux_vanishes_on_the_diagonal() {
        let params = sym(0.7, 0.4, 0.2);
        for kind in FluxKind::ALL {
            for x in [0.1, 1.0, 3.7] {
                assert_eq!(flux(kind, x, x, &params).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn high_t_flux_is_the_small_energy_limit_of_the_general_flux() {
        let params = EngineParams::power_curve_defaults(0.3, 0.4);
        let ratio = |eps: f64| {
            let g = flux(FluxKind::General, 1.3 * eps, eps, &params).unwrap();
            let h = flux(FluxKind::HighT, 1.3 * eps, eps, &params).unwrap();
            g / h
        };
        assert!((ratio(1e-3) - 1.0).abs() < 1e-2);
        assert!((ratio(1e-4) - 1.0).abs() < (ratio(1e-3) - 1.0).abs());
    }

    #[test]
    fn strong_drive_flux_matches_strong_drive_power() {
        let params = EngineParams {
            t_c: 5.0,
            ..EngineParams::emp_curve_defaults(0.3)
        };
        for (wc, wh) in [(2.0, 3.0), (5.5, 9.0), (1.0, 1.5)] {
            let (x, y) = (wc / params.t_c, wh / params.t_h);
            let i = flux(FluxKind::StrongCouplingHighT, x, y, &params).unwrap();
            let pw = power_strong_ht(wc, wh, &params).unwrap();
            assert!(rel(pw, (wh - wc) * i) < 1e-13);
        }
    }

    #[test]
    fn strong_drive_power_is_the_joint_limit_of_the_exact_power() {
        let base = EngineParams {
            gamma_c: 1.0,
            gamma_h: 1.0,
            ..EngineParams::power_curve_defaults(1e3, 0.3)
        };
        let params = EngineParams {
            omega_c: 0.0594,
            omega_h: 0.09,
            ..base
        };
        let occ = params.occupations().unwrap();
        assert!(occ.n_c >= 100.0 && occ.n_h >= 100.0);
        let exact = power_closed_form(&params).unwrap();
        let limit = power_strong_ht(params.omega_c, params.omega_h, &params).unwrap();
        assert!(rel(exact, limit) < 2e-2);
    }

    #[test]
    fn antisymmetry_of_limit_fluxes() {
        let params = sym(0.8, 0.5, 0.0);
        for (x, y) in [(0.3, 1.1), (2.0, 0.7)] {
            for kind in [
                FluxKind::HighT,
                FluxKind::StrongCouplingHighT,
                FluxKind::LowT,
            ] {
                let a = flux(kind, x, y, &params).unwrap();
                let b = flux(kind, y, x, &params).unwrap();
                assert!((a + b).abs() < 1e-15, "{kind:?}");
            }
        }
    }

    #[test]
    fn low_t_power_zeros_and_optimum() {
        assert_eq!(power_low_t(2.0, 2.0 * 0.6, 0.4, 10.0), 0.0);
        assert_eq!(power_low_t(2.0, 2.0, 0.4, 10.0), 0.0);
        let (x, y) = low_t_optimum(0.4);
        assert!((x - 2.277_064_0).abs() < 1e-6);
        assert!((y - 1.766_238_4).abs() < 1e-6);
        // efficiency at the optimum
        assert!((1.0 - 0.6 * x / y - emp_low_t(0.4)).abs() < 1e-14);
    }

    #[test]
    fn low_t_emp_values() {
        assert!((emp_low_t(0.5) - 0.25 / (0.5 + 0.5 * 2f64.ln())).abs() < 1e-15);
        assert!((emp_low_t(1e-6) / 1e-6 - 0.5).abs() < 1e-6);
        let mut last = 0.0;
        for k in 1..100 {
            let eta = k as f64 / 100.0;
            let e = emp_low_t(eta);
            assert!(e < eta && e > last);
            last = e;
        }
    }

    #[test]
    fn high_t_symmetric_emp() {
        let eta = 0.2;
        assert!((emp_high_t_symmetric(eta, 0.0) - (eta / 2.0 + eta * eta / 8.0)).abs() < 1e-16);
        assert_eq!(emp_high_t_symmetric(eta, -1.0), eta / 2.0);
        assert!((emp_high_t_symmetric(eta, 1.0) - (eta / 2.0 + eta * eta / 6.0)).abs() < 1e-16);
    }

    #[test]
    fn fixed_wh_emp_matches_its_radical_form() {
        for (gc, gh, p) in [(1.0, 0.5, 0.0), (0.3, 2.0, 0.9), (1.7, 0.2, -0.8)] {
            let params = EngineParams {
                gamma_c: gc,
                gamma_h: gh,
                ..EngineParams::emp_curve_defaults(p)
            };
            for eta in [0.05, 0.4, 0.9] {
                let h = (1.0 + p) * gh;
                let s = 1.0 - eta;
                let radical = (h + gc * s - (s * (gc + h) * (s * gc + h)).sqrt()) / h;
                assert!((emp_fixed_wh(eta, &params).unwrap() - radical).abs() < 1e-13);
            }
        }
        assert!(emp_fixed_wh(0.3, &EngineParams::emp_curve_defaults(-1.0)).is_err());
        let small = emp_fixed_wh(1e-7, &EngineParams::emp_curve_defaults(0.0)).unwrap();
        assert!((small / 1e-7 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn expansions_match_the_closed_form_emp() {
        let params = EngineParams {
            gamma_c: 0.6,
            gamma_h: 1.4,
            ..EngineParams::emp_curve_defaults(0.35)
        };
        let t = taylor_one_parameter(OneParameterScheme::FixedWh, &params).unwrap();
        let eta: f64 = 1e-3;
        let series = t.c1 * eta + t.c2 * eta * eta + t.c3.unwrap() * eta.powi(3);
        assert!((emp_fixed_wh(eta, &params).unwrap() - series).abs() < 1e-11);
    }

    #[test]
    fn symmetric_expansion_coefficients() {
        let params = sym(1.0, 1.0, 0.0);
        let c2 = |s| taylor_one_parameter(s, &params).unwrap().c2;
        assert!((c2(OneParameterScheme::FixedWh) - 1.0 / 16.0).abs() < 1e-15);
        assert!((c2(OneParameterScheme::FixedWc) - 3.0 / 16.0).abs() < 1e-15);
        assert!((c2(OneParameterScheme::SumConstraint) - 1.0 / 8.0).abs() < 1e-15);
        assert!(taylor_one_parameter(OneParameterScheme::FixedWh, &params.with_p(-1.0)).is_err());
    }

    #[test]
    fn optimal_p_is_a_stationary_point_of_the_power() {
        let params = EngineParams::power_curve_defaults(0.2, 0.0);
        let opt = optimal_p(&params).unwrap();
        assert!(opt.is_interior());
        let h = 1e-4;
        let pw = |p: f64| power_closed_form(&params.with_p(p)).unwrap();
        let slope = (pw(opt.value + h) - pw(opt.value - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-9);
        assert!(pw(opt.value) > pw(opt.value + 0.05) && pw(opt.value) > pw(opt.value - 0.05));
    }

    #[test]
    fn optimal_p_monotonicity_and_clamping() {
        let base = EngineParams::power_curve_defaults(0.2, 0.0);
        let a = optimal_p(&base).unwrap().value;
        let b = optimal_p(&base.with_lambda(0.25)).unwrap().value;
        let c = optimal_p(&EngineParams {
            gamma_h: 0.6,
            ..base
        })
        .unwrap()
        .value;
        assert!(b > a && c < a);
        let strong = optimal_p(&base.with_lambda(5.0)).unwrap();
        assert_eq!(strong.clamped, 1.0);
        assert_eq!(strong.boundary, Some(PBoundary::NearOne));
    }

    #[test]
    fn near_equilibrium_coefficient_reference_points() {
        // (gamma_c, gamma_h, lambda, p, alpha, c2)
        let cases = [
            (1.0, 1.0, 0.2, 0.0, 2.594_292_683_858, 0.115_105_440_045),
            (0.25, 0.5, 0.2, 0.5, 2.461_183_090_2, 0.101_227_258_5),
            (0.25, 0.5, 0.1, 0.0, 2.548_220_174, 0.108_035_617),
            (1.0, 1.0, 5.0, 0.3, 2.279_728_871, 0.108_841_239),
        ];
        for (gc, gh, lam, p, alpha, c2) in cases {
            let params = EngineParams {
                gamma_c: gc,
                gamma_h: gh,
                ..EngineParams::power_curve_defaults(lam, p)
            };
            let got = emp_near_equilibrium_coefficient(&params, alpha).unwrap();
            assert!((got - c2).abs() < 1e-8, "{got} vs {c2}");
        }
    }

    #[test]
    fn flux_kind_names_round_trip() {
        for k in FluxKind::ALL {
            assert_eq!(FluxKind::parse(k.name()), Some(k));
        }
        assert_eq!(FluxKind::parse("high-t"), Some(FluxKind::HighT));
    }
}
