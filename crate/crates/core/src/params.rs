// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters of the engine, bath occupations and validation.
//!
//! Natural units are used throughout (ħ = k_B = 1): frequencies, energies and
//! temperatures share one unit, and rates are inverse times.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every physical control of the four-level engine.
///
/// The two hot branches share one coupling `gamma_h`, and the cross term of
/// the hot dissipator is weighted by `gamma_h * p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    /// Cold transition frequency |0> <-> |g>.
    pub omega_c: f64,
    /// Hot transition frequency |1>,|2> <-> |g>.
    pub omega_h: f64,
    pub gamma_c: f64,
    pub gamma_h: f64,
    /// Matter-field (drive) coupling.
    pub lambda: f64,
    /// Noise-induced coherence parameter in [-1, 1].
    pub p: f64,
    pub t_c: f64,
    pub t_h: f64,
}

impl EngineParams {
    /// Operating point of the power-versus-coherence curves: Γc = 0.25,
    /// Γh = 0.5, T_h = 10, T_c = 6, ω_h = 10, ω_c = 7.
    pub fn power_curve_defaults(lambda: f64, p: f64) -> Self {
        EngineParams {
            omega_c: 7.0,
            omega_h: 10.0,
            gamma_c: 0.25,
            gamma_h: 0.5,
            lambda,
            p,
            t_c: 6.0,
            t_h: 10.0,
        }
    }

    /// Operating point of the EMP-versus-Carnot curves: as
    /// [`power_curve_defaults`](Self::power_curve_defaults) but Γc = 1.
    pub fn emp_curve_defaults(p: f64) -> Self {
        EngineParams {
            gamma_c: 1.0,
            ..Self::power_curve_defaults(1.0, p)
        }
    }

    pub fn with_p(self, p: f64) -> Self {
        EngineParams { p, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        EngineParams { lambda, ..self }
    }

    /// Same hot temperature, cold temperature chosen so that the Carnot
    /// efficiency equals `eta_c`.
    pub fn with_carnot(self, eta_c: f64) -> Self {
        EngineParams {
            t_c: (1.0 - eta_c) * self.t_h,
            ..self
        }
    }

    pub fn occupations(&self) -> Result<BathOccupations> {
        Ok(BathOccupations {
            n_c: planck_occupation(self.omega_c, self.t_c)?,
            n_h: planck_occupation(self.omega_h, self.t_h)?,
        })
    }

    pub fn scaled(&self) -> DimensionlessPoint {
        DimensionlessPoint {
            x: self.omega_c / self.t_c,
            y: self.omega_h / self.t_h,
        }
    }

    pub fn carnot(&self) -> Result<f64> {
        carnot(self)
    }

    /// Short `key=value` rendering used in error messages and file headers.
    pub fn describe(&self) -> String {
        format!(
            "omega_c={} omega_h={} gamma_c={} gamma_h={} lambda={} p={} t_c={} t_h={}",
            self.omega_c,
            self.omega_h,
            self.gamma_c,
            self.gamma_h,
            self.lambda,
            self.p,
            self.t_c,
            self.t_h
        )
    }
}

/// Mean photon numbers of the two baths at their filter frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathOccupations {
    pub n_c: f64,
    pub n_h: f64,
}

/// Scaled energies x = ω_c/T_c and y = ω_h/T_h. The engine produces
/// positive power exactly when x > y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessPoint {
    pub x: f64,
    pub y: f64,
}

impl DimensionlessPoint {
    pub fn occupations(&self) -> BathOccupations {
        BathOccupations {
            n_c: 1.0 / self.x.exp_m1(),
            n_h: 1.0 / self.y.exp_m1(),
        }
    }
}

/// Planck occupation 1/(e^{ω/T} − 1).
pub fn planck_occupation(omega: f64, temp: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) || !(temp > 0.0 && temp.is_finite()) {
        return Err(Error::domain(format!(
            "planck occupation needs omega > 0 and temp > 0 (got omega={omega}, temp={temp})"
        )));
    }
    Ok(1.0 / (omega / temp).exp_m1())
}

/// Carnot efficiency 1 − T_c/T_h.
pub fn carnot(params: &EngineParams) -> Result<f64> {
    let (t_c, t_h) = (params.t_c, params.t_h);
    if !(t_c > 0.0) || !(t_h > t_c) || !t_h.is_finite() {
        return Err(Error::domain(format!(
            "carnot efficiency needs 0 < t_c < t_h (got t_c={t_c}, t_h={t_h})"
        )));
    }
    Ok(1.0 - t_c / t_h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationMode {
    /// Adds ω_h > ω_c and T_h > T_c on top of the unrestricted checks.
    Engine,
    /// Finiteness, positivity of rates/frequencies/temperatures, λ ≥ 0, p in [-1, 1].
    Unrestricted,
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every violation found by [`validate`]; never empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn mentions(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.message.contains(needle))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks all parameter invariants and collects every violation.
pub fn validate(
    params: &EngineParams,
    mode: ValidationMode,
) -> std::result::Result<EngineParams, ValidationReport> {
    let mut violations = Vec::new();
    let mut push = |field: &'static str, message: &str| {
        violations.push(Violation {
            field,
            message: message.to_string(),
        })
    };

    let all = [
        ("omega_c", params.omega_c),
        ("omega_h", params.omega_h),
        ("gamma_c", params.gamma_c),
        ("gamma_h", params.gamma_h),
        ("lambda", params.lambda),
        ("p", params.p),
        ("t_c", params.t_c),
        ("t_h", params.t_h),
    ];
    for (field, value) in all {
        if !value.is_finite() {
            push(field, "value must be finite");
        }
    }

    for (field, value) in [("gamma_c", params.gamma_c), ("gamma_h", params.gamma_h)] {
        if !(value > 0.0) {
            push(field, "rate must be positive");
        }
    }
    for (field, value) in [("omega_c", params.omega_c), ("omega_h", params.omega_h)] {
        if !(value > 0.0) {
            push(field, "frequency must be positive");
        }
    }
    for (field, value) in [("t_c", params.t_c), ("t_h", params.t_h)] {
        if !(value > 0.0) {
            push(field, "temperature must be positive");
        }
    }
    if !(params.lambda >= 0.0) {
        push("lambda", "coupling must be non-negative");
    }
    if !(-1.0..=1.0).contains(&params.p) {
        push("p", "p out of [-1,1]");
    }

    if mode == ValidationMode::Engine {
        if !(params.omega_h > params.omega_c) {
            push("omega_h", "engine mode needs omega_h > omega_c");
        }
        if !(params.t_h > params.t_c) {
            push("t_h", "engine mode needs t_h > t_c");
        }
    }

    if violations.is_empty() {
        Ok(*params)
    } else {
        Err(ValidationReport { violations })
    }
}

/// [`validate`] in engine mode, folded into the crate error type.
pub(crate) fn require_engine(params: &EngineParams) -> Result<()> {
    validate(params, ValidationMode::Engine)
        .map(|_| ())
        .map_err(|report| Error::domain(format!("invalid parameters: {report}")))
}

/// [`validate`] in unrestricted mode, folded into the crate error type.
pub(crate) fn require_valid(params: &EngineParams) -> Result<()> {
    validate(params, ValidationMode::Unrestricted)
        .map(|_| ())
        .map_err(|report| Error::domain(format!("invalid parameters: {report}")))
}
