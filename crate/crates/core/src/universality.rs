// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Near-equilibrium efficiency at maximum power from the matter flux.
//!
//! For a flux `I(x, y)` with `I(x, x) = 0`, write `L = −∂₁I(x, x)` and
//! `M = ∂₁∂₁I(x, x)/2`, derivatives taken in the first (cold) argument. The
//! efficiency at maximum power is `η_C/2 + (1 + M/∂ₓL) η_C²/4 + O(η_C³)`, with
//! the derivatives evaluated at the root `α` of `x = −2L/∂ₓL`. A flux that
//! is odd under exchange of its arguments has `2M = −∂ₓL`, hence the
//! coefficient 1/8.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{flux, FluxKind};
use crate::error::{Error, Result};
use crate::optimize::{emp_numeric, PowerModel, Scheme};
use crate::params::EngineParams;

/// Relative finite-difference step: `h = STEP · x`.
pub const STEP: f64 = 1e-3;
/// Scan interval for the operating point.
pub const ALPHA_SCAN: (f64, f64) = (1e-3, 50.0);
const ALPHA_SCAN_POINTS: usize = 400;
const ALPHA_TOL: f64 = 1e-10;
/// Point closest to the origin used by the high-temperature limit.
const LIMIT_START: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxDerivatives {
    /// `L = −∂₁I(x, x)`.
    pub l_value: f64,
    /// `M = ∂₁∂₁I(x, x)/2`.
    pub m_value: f64,
    /// `dL/dx` along the diagonal.
    pub dl_dx: f64,
    pub x_star: f64,
    /// `I(x, x)`, zero for every physical flux.
    pub diagonal_flux: f64,
}

/// Central difference with one Richardson level.
fn richardson<F>(f: F, h: f64, second: bool) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = |h: f64| -> Result<f64> {
        let (plus, minus) = (f(h)?, f(-h)?);
        Ok(if second {
            (plus - 2.0 * f(0.0)? + minus) / (h * h)
        } else {
            (plus - minus) / (2.0 * h)
        })
    };
    let (coarse, fine) = (d(h)?, d(0.5 * h)?);
    let v = (4.0 * fine - coarse) / 3.0;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!(
            "non-finite finite-difference estimate (step {h})"
        )))
    }
}

fn l_and_m(kind: FluxKind, x: f64, params: &EngineParams) -> Result<(f64, f64)> {
    let h = STEP * x;
    let along_first = |d: f64| flux(kind, x + d, x, params);
    let first = richardson(along_first, h, false)?;
    let second = richardson(along_first, h, true)?;
    Ok((-first, 0.5 * second))
}

/// `L`, `M` and `∂ₓL` at `x` by central differences with one Richardson
/// level, step `h = 10⁻³ x`.
pub fn flux_derivatives(kind: FluxKind, x: f64, params: &EngineParams) -> Result<FluxDerivatives> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!(
            "flux derivatives need x > 0 (got {x})"
        )));
    }
    let (l_value, m_value) = l_and_m(kind, x, params)?;
    let dl_dx = richardson(
        |d| l_and_m(kind, x + d, params).map(|(l, _)| l),
        STEP * x,
        false,
    )?;
    Ok(FluxDerivatives {
        l_value,
        m_value,
        dl_dx,
        x_star: x,
        diagonal_flux: flux(kind, x, x, params)?,
    })
}

/// `x ∂ₓL + 2L`, which vanishes exactly where `x = −2L/∂ₓL` and has no
/// poles where `∂ₓL` does.
fn alpha_residual(kind: FluxKind, x: f64, params: &EngineParams) -> Result<f64> {
    let d = flux_derivatives(kind, x, params)?;
    Ok(x * d.dl_dx + 2.0 * d.l_value)
}

/// Operating point `α` solving `x = −2L/∂ₓL`: the first sign change on a
/// logarithmic scan of [`ALPHA_SCAN`], refined by bisection to 10⁻¹⁰.
pub fn solve_alpha(params: &EngineParams, kind: FluxKind) -> Result<f64> {
    let (lo, hi) = ALPHA_SCAN;
    let ratio = (hi / lo).powf(1.0 / (ALPHA_SCAN_POINTS - 1) as f64);
    let mut a = lo;
    let mut fa = alpha_residual(kind, a, params)?;
    for i in 1..ALPHA_SCAN_POINTS {
        let b = if i + 1 == ALPHA_SCAN_POINTS {
            hi
        } else {
            lo * ratio.powi(i as i32)
        };
        let fb = alpha_residual(kind, b, params)?;
        if fa * fb < 0.0 {
            let (mut a, mut b, mut fa) = (a, b, fa);
            while b - a > ALPHA_TOL {
                let mid = 0.5 * (a + b);
                let fm = alpha_residual(kind, mid, params)?;
                if fm == 0.0 {
                    return Ok(mid);
                }
                if fa * fm < 0.0 {
                    b = mid;
                } else {
                    (a, fa) = (mid, fm);
                }
            }
            return Ok(0.5 * (a + b));
        }
        (a, fa) = (b, fb);
    }
    Err(Error::NoRoot { lo, hi })
}

/// `(1 + M/∂ₓL)/4` at `x`.
pub fn second_order_at(kind: FluxKind, x: f64, params: &EngineParams) -> Result<f64> {
    let d = flux_derivatives(kind, x, params)?;
    if d.dl_dx == 0.0 {
        return Err(Error::SingularFormula(format!("dL/dx vanishes at x = {x}")));
    }
    Ok(0.25 * (1.0 + d.m_value / d.dl_dx))
}

/// Coefficient of η_C² in the efficiency at maximum power.
///
/// Evaluated at [`solve_alpha`]. The two high-temperature fluxes have no
/// finite operating point; for them the coefficient is the limit x → 0⁺,
/// extrapolated from x = 10⁻² and 5·10⁻³.
pub fn emp_second_order(params: &EngineParams, kind: FluxKind) -> Result<f64> {
    match solve_alpha(params, kind) {
        Ok(alpha) => second_order_at(kind, alpha, params),
        Err(Error::NoRoot { .. })
            if matches!(kind, FluxKind::HighT | FluxKind::StrongCouplingHighT) =>
        {
            let coarse = second_order_at(kind, LIMIT_START, params)?;
            let fine = second_order_at(kind, 0.5 * LIMIT_START, params)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryDefect {
    /// Largest `|I(x, y) + I(y, x)|` over the samples.
    pub max_defect: f64,
    pub worst: (f64, f64),
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let (mut value, mut scale) = (0.0, 1.0 / base as f64);
    while i > 0 {
        value += (i % base) as f64 * scale;
        i /= base;
        scale /= base as f64;
    }
    value
}

/// Antisymmetry defect of a flux on `sample_count` Halton points of
/// [0.1, 5]².
pub fn symmetry_defect(
    kind: FluxKind,
    params: &EngineParams,
    sample_count: usize,
) -> Result<SymmetryDefect> {
    if sample_count == 0 {
        return Err(Error::domain("symmetry_defect needs at least one sample"));
    }
    let mut out = SymmetryDefect {
        max_defect: 0.0,
        worst: (0.1, 0.1),
    };
    for i in 1..=sample_count {
        let x = 0.1 + 4.9 * radical_inverse(i, 2);
        let y = 0.1 + 4.9 * radical_inverse(i, 3);
        let defect = (flux(kind, x, y, params)? + flux(kind, y, x, params)?).abs();
        if defect > out.max_defect {
            out = SymmetryDefect {
                max_defect: defect,
                worst: (x, y),
            };
        }
    }
    Ok(out)
}

/// Carnot efficiencies used by [`extract_emp_series`].
pub fn default_eta_grid() -> Vec<f64> {
    (1..=8).map(|k| 0.02 * k as f64).collect()
}

/// Efficiency-at-maximum-power series fitted from numerical optima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpSeries {
    pub c1: f64,
    pub c2: f64,
    /// Fitted but noisier than `c1`, `c2`; informational.
    pub c3: f64,
    /// Largest fit error relative to the largest sample.
    pub residual: f64,
    pub eta_grid: Vec<f64>,
    pub efficiencies: Vec<f64>,
}

/// Runs [`emp_numeric`] on the default Carnot grid (T_h fixed, T_c varied)
/// and fits `η/η_C = c1 + c2 η_C + c3 η_C² + c4 η_C³` by least squares.
pub fn extract_emp_series(
    params: &EngineParams,
    scheme: Scheme,
    model: PowerModel,
) -> Result<EmpSeries> {
    extract_emp_series_on(params, scheme, model, &default_eta_grid())
}

pub fn extract_emp_series_on(
    params: &EngineParams,
    scheme: Scheme,
    model: PowerModel,
    eta_grid: &[f64],
) -> Result<EmpSeries> {
    const TERMS: usize = 4;
    if eta_grid.len() < TERMS {
        return Err(Error::domain(format!(
            "series fit needs at least {TERMS} grid points"
        )));
    }
    let efficiencies = eta_grid
        .par_iter()
        .map(|&eta| {
            emp_numeric(&params.with_carnot(eta), scheme, model)
                .map(|r| r.efficiency)
                .map_err(|e| Error::AtCarnot {
                    eta_c: eta,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<f64>>>()?;

    let n = eta_grid.len();
    let design = DMatrix::from_fn(n, TERMS, |i, j| eta_grid[i].powi(j as i32));
    let target = DVector::from_fn(n, |i, _| efficiencies[i] / eta_grid[i]);
    let coef = design
        .clone()
        .svd(true, true)
        .solve(&target, 1e-14)
        .map_err(|e| Error::domain(format!("series fit failed: {e}")))?;

    let largest = efficiencies.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let fitted = &design * &coef;
    let residual = (0..n)
        .map(|i| ((fitted[i] - target[i]) * eta_grid[i]).abs())
        .fold(0.0, f64::max)
        / largest;
    Ok(EmpSeries {
        c1: coef[0],
        c2: coef[1],
        c3: coef[2],
        residual,
        eta_grid: eta_grid.to_vec(),
        efficiencies,
    })
}
