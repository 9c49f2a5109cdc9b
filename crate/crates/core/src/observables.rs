// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Power, hot heat flux and efficiency, from a state or in closed form.
//!
//! Engine-mode power is positive. Both the power and the hot heat flux are
//! proportional to the coherence current
//! `s = i[(ρ_01 − ρ_10) + (ρ_02 − ρ_20)] = 2 Im ρ_10 + 2 Im ρ_20`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liouvillian::{DensityMatrix, Level};
use crate::params::{require_valid, BathOccupations, EngineParams};

/// Largest imaginary residue of the coherence current accepted as rounding.
pub const CURRENT_IMAG_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub power: f64,
    pub hot_heat_flux: f64,
    /// P / Q_h, or 1 − ω_c/ω_h where the heat flux vanishes.
    pub efficiency: f64,
    pub coherence_current: f64,
}

/// The real coherence current of a state.
pub fn coherence_current(state: &DensityMatrix) -> Result<f64> {
    let e = |r, c| state.entry(r, c);
    let bracket = (e(Level::Zero, Level::One) - e(Level::One, Level::Zero))
        + (e(Level::Zero, Level::Two) - e(Level::Two, Level::Zero));
    // i * bracket
    let (re, im) = (-bracket.im, bracket.re);
    if im.abs() > CURRENT_IMAG_TOLERANCE {
        return Err(Error::InconsistentState(format!(
            "coherence current has imaginary part {im:.3e}"
        )));
    }
    Ok(re)
}

pub fn power_from_state(params: &EngineParams, state: &DensityMatrix) -> Result<f64> {
    Ok((params.omega_h - params.omega_c) * params.lambda * coherence_current(state)?)
}

pub fn hot_heat_flux_from_state(params: &EngineParams, state: &DensityMatrix) -> Result<f64> {
    Ok(params.omega_h * params.lambda * coherence_current(state)?)
}

/// All observables of `state` in one pass.
pub fn observables(params: &EngineParams, state: &DensityMatrix) -> Result<Observables> {
    let s = coherence_current(state)?;
    let power = (params.omega_h - params.omega_c) * params.lambda * s;
    let hot_heat_flux = params.omega_h * params.lambda * s;
    let efficiency = if hot_heat_flux != 0.0 {
        power / hot_heat_flux
    } else {
        efficiency(params)
    };
    Ok(Observables {
        power,
        hot_heat_flux,
        efficiency,
        coherence_current: s,
    })
}

/// Efficiency 1 − ω_c/ω_h. Independent of the state: every photon carried
/// through the engine converts ω_h of heat into ω_h − ω_c of work.
pub fn efficiency(params: &EngineParams) -> f64 {
    1.0 - params.omega_c / params.omega_h
}

/// n_h − n_c for scaled energies x = ω_c/T_c and y = ω_h/T_h, without the
/// cancellation of the direct difference near x = y.
pub(crate) fn occupation_gap(x: f64, y: f64) -> f64 {
    if y < 700.0 && x - y < 700.0 {
        let (n_c, n_h) = (1.0 / x.exp_m1(), 1.0 / y.exp_m1());
        n_h * n_c * y.exp() * (x - y).exp_m1()
    } else {
        1.0 / y.exp_m1() - 1.0 / x.exp_m1()
    }
}

/// The four denominator terms of the closed-form power.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PowerTerms {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
}

pub(crate) fn power_terms(params: &EngineParams, occ: BathOccupations) -> PowerTerms {
    let (n_c, n_h) = (occ.n_c, occ.n_h);
    let (g_c, g_h, q) = (params.gamma_c, params.gamma_h, 1.0 + params.p);
    let lam2 = params.lambda * params.lambda;
    PowerTerms {
        t1: 8.0 * lam2 * g_h * (1.0 + n_h) * (1.0 + 4.0 * n_h) * q,
        t2: 8.0 * lam2 * g_c * (1.0 + 3.0 * n_c + 2.0 * n_h + 4.0 * n_c * n_h),
        t3: g_c
            * g_c
            * g_h
            * (1.0 + n_c)
            * (1.0 + n_h)
            * (1.0 + 3.0 * n_h + n_c * (2.0 + 4.0 * n_h))
            * q,
        t4: g_c
            * g_h
            * g_h
            * (1.0 + n_h).powi(2)
            * (1.0 + 2.0 * n_c + 3.0 * n_h + 4.0 * n_c * n_h)
            * q
            * q,
    }
}

/// Steady-state power in closed form.
pub fn power_closed_form(params: &EngineParams) -> Result<f64> {
    require_valid(params)?;
    let occ = params.occupations()?;
    let q = 1.0 + params.p;
    if q == 0.0 || params.lambda == 0.0 {
        return Ok(0.0);
    }
    let t = power_terms(params, occ);
    let denominator = t.t1 + t.t2 + t.t3 + t.t4;
    if !(denominator > 0.0) {
        return Err(Error::domain(format!(
            "closed-form power denominator {denominator} at {}",
            params.describe()
        )));
    }
    let gap = occupation_gap(params.omega_c / params.t_c, params.omega_h / params.t_h);
    let numerator = 8.0
        * gap
        * (1.0 + occ.n_h)
        * q
        * params.gamma_c
        * params.gamma_h
        * params.lambda
        * params.lambda
        * (params.omega_h - params.omega_c);
    Ok(numerator / denominator)
}

/// Occupation-number form of the closed-form denominator, split into its
/// drive-independent part and its λ² part.
#[cfg(test)]
pub(crate) fn denominator_occupation_form(
    params: &EngineParams,
    occ: BathOccupations,
) -> (f64, f64) {
    let (n_c, n_h) = (occ.n_c, occ.n_h);
    let (g_c, g_h, q) = (params.gamma_c, params.gamma_h, 1.0 + params.p);
    let a = q
        * g_c
        * g_h
        * (n_h + 1.0)
        * (n_c * (4.0 * n_h + 2.0) + 3.0 * n_h + 1.0)
        * (g_c * (n_c + 1.0) + q * g_h * (n_h + 1.0));
    let b = 8.0
        * params.lambda
        * params.lambda
        * (g_c * (n_c * (4.0 * n_h + 3.0) + 2.0 * n_h + 1.0)
            + q * g_h * (4.0 * n_h * n_h + 5.0 * n_h + 1.0));
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::{solve_steady_full, solve_steady_reduced, Complex64, Operator};
    use crate::params::carnot;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn current_of_a_pure_imaginary_coherence() {
        let c = 0.03;
        let mut m = Operator::zeros();
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        m[(1, 1)] = Complex64::new(0.3, 0.0);
        m[(2, 2)] = Complex64::new(0.1, 0.0);
        m[(3, 3)] = Complex64::new(0.1, 0.0);
        for k in [2, 3] {
            m[(k, 1)] = Complex64::new(0.0, c);
            m[(1, k)] = Complex64::new(0.0, -c);
        }
        let s = coherence_current(&DensityMatrix::from_matrix(m)).unwrap();
        assert!((s - 4.0 * c).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_coherence_is_rejected() {
        let mut m = DensityMatrix::maximally_mixed().matrix().clone_owned();
        m[(2, 1)] = Complex64::new(1e-3, 0.0);
        match coherence_current(&DensityMatrix::from_matrix(m)) {
            Err(Error::InconsistentState(_)) => {}
            other => panic!("expected inconsistent state, got {other:?}"),
        }
    }

    #[test]
    fn closed_form_reference_values() {
        let p = power_closed_form(&EngineParams::power_curve_defaults(0.1, 0.0)).unwrap();
        assert!(rel(p, 4.477_215e-3) < 1e-6, "{p}");
        let p = power_closed_form(&EngineParams::power_curve_defaults(0.2, 0.5)).unwrap();
        assert!(rel(p, 9.745_66e-3) < 1e-5, "{p}");
    }

    #[test]
    fn term_form_equals_occupation_form() {
        for (lam, p) in [(0.1, 0.0), (0.7, -0.4), (2.0, 0.9)] {
            let params = EngineParams::power_curve_defaults(lam, p);
            let occ = params.occupations().unwrap();
            let t = power_terms(&params, occ);
            let (a, b) = denominator_occupation_form(&params, occ);
            assert!(rel(t.t1 + t.t2 + t.t3 + t.t4, a + b) < 1e-14);
            assert!(rel(t.t3 + t.t4, a) < 1e-14);
        }
    }

    #[test]
    fn state_power_matches_closed_form() {
        for (lam, p) in [(0.1, 0.0), (0.2, 0.5), (0.3, -0.9)] {
            let params = EngineParams::power_curve_defaults(lam, p);
            let closed = power_closed_form(&params).unwrap();
            for sol in [
                solve_steady_reduced(&params).unwrap(),
                solve_steady_full(&params).unwrap(),
            ] {
                let obs = observables(&params, &sol.state).unwrap();
                assert!(rel(obs.power, closed) < 1e-10);
                assert!(obs.power > 0.0 && obs.hot_heat_flux > 0.0);
                assert!((obs.efficiency - efficiency(&params)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_power_cases() {
        let base = EngineParams::power_curve_defaults(0.2, 0.3);
        assert_eq!(power_closed_form(&base.with_p(-1.0)).unwrap(), 0.0);
        assert_eq!(power_closed_form(&base.with_lambda(0.0)).unwrap(), 0.0);
        // x = y exactly
        let balanced = EngineParams {
            omega_c: 6.0,
            ..base
        };
        assert_eq!(power_closed_form(&balanced).unwrap(), 0.0);
        let state = solve_steady_full(&balanced).unwrap().state;
        assert!(power_from_state(&balanced, &state).unwrap().abs() < 1e-10);
        let same = EngineParams {
            omega_c: 10.0,
            ..base
        };
        assert_eq!(power_closed_form(&same).unwrap(), 0.0);
        let state = solve_steady_full(&base.with_lambda(0.0)).unwrap().state;
        assert_eq!(
            power_from_state(&base.with_lambda(0.0), &state).unwrap(),
            0.0
        );
    }

    #[test]
    fn sign_law_follows_scaled_energies() {
        let base = EngineParams::power_curve_defaults(0.2, 0.3);
        for omega_c in [1.0, 3.0, 5.0, 5.9, 6.1, 7.0, 9.5] {
            let params = EngineParams { omega_c, ..base };
            let pw = power_closed_form(&params).unwrap();
            let (x, y) = (omega_c / params.t_c, params.omega_h / params.t_h);
            assert_eq!(pw > 0.0, x > y, "omega_c={omega_c}");
            if pw >= 0.0 {
                assert!(efficiency(&params) <= carnot(&params).unwrap());
            }
        }
    }

    #[test]
    fn efficiency_reference_values() {
        let params = EngineParams::power_curve_defaults(0.1, 0.0);
        assert!((efficiency(&params) - 0.3).abs() < 1e-15);
        let at_carnot = EngineParams {
            omega_c: 6.0,
            ..params
        };
        assert!((efficiency(&at_carnot) - carnot(&at_carnot).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn strong_drive_power_grows_with_coherence() {
        let base = EngineParams::power_curve_defaults(0.0, 0.0);
        let occ = base.occupations().unwrap();
        let lam = 10.0 * (base.gamma_c * (1.0 + occ.n_c)).max(base.gamma_h * (1.0 + occ.n_h));
        let mut last = f64::NEG_INFINITY;
        for k in 0..=100 {
            let p = -1.0 + 0.02 * k as f64;
            let pw = power_closed_form(&base.with_lambda(lam).with_p(p.min(1.0))).unwrap();
            assert!(pw >= last);
            last = pw;
        }
    }

    #[test]
    fn gap_is_stable_near_the_diagonal() {
        let (x, y): (f64, f64) = (1.0 + 1e-12, 1.0);
        let direct = 1.0 / y.exp_m1() - 1.0 / x.exp_m1();
        let gap = occupation_gap(x, y);
        let exact = (x - y) * y.exp() / y.exp_m1().powi(2);
        assert!(rel(gap, exact) < 1e-9);
        assert!(rel(direct, exact) > rel(gap, exact));
        assert!(occupation_gap(800.0, 750.0) >= 0.0);
    }
}
