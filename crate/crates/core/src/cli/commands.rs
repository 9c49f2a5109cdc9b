// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde_json::Value;

use crate::closed_forms::{
    emp_fixed_wh, emp_low_t, low_t_optimum, optimal_p, taylor_one_parameter, FluxKind,
    OneParameterScheme,
};
use crate::error::{Error, Result};
use crate::liouvillian::{solve_steady_full, solve_steady_reduced, Level, SteadyStateSolution};
use crate::observables::{observables, power_closed_form, power_from_state};
use crate::optimize::{emp_numeric, PowerModel, Scheme};
use crate::params::{require_engine, EngineParams};
use crate::universality::{emp_second_order, extract_emp_series, solve_alpha, symmetry_defect};

use super::report::{Cell, Report};
use super::{RunConfig, Sweep, SweepVar};

/// Absolute floor below which two powers count as equal.
const ABS_FLOOR: f64 = 1e-12;
const ALPHA_CHECK: f64 = 1e-9;

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn params_meta(params: &EngineParams) -> Value {
    serde_json::to_value(params).unwrap_or(Value::Null)
}

fn status(pass: bool) -> Cell {
    Cell::from(if pass { "pass" } else { "fail" })
}

fn engine_params(cfg: &RunConfig) -> Result<EngineParams> {
    require_engine(&cfg.params).map_err(|e| Error::Config(e.to_string()))?;
    Ok(cfg.params)
}

/// Both steady-state solutions with their observables.
pub fn cmd_steady(cfg: &RunConfig) -> Result<Report> {
    let params = cfg.params;
    let closed = power_closed_form(&params)?;
    let mut columns: Vec<String> = [
        "method",
        "residual",
        "power",
        "power_closed_form",
        "rel_diff",
        "hot_heat_flux",
        "efficiency",
        "coherence_current",
        "trace_defect",
        "hermiticity_defect",
        "min_eigenvalue",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let labels = ["g", "0", "1", "2"];
    for r in labels {
        for c in labels {
            columns.push(format!("rho_{r}{c}_re"));
            columns.push(format!("rho_{r}{c}_im"));
        }
    }

    let mut report = Report::new("steady", &[]);
    report.columns = columns;
    report.meta("params", params_meta(&params));

    let solvers: [(&str, fn(&EngineParams) -> Result<SteadyStateSolution>); 2] = [
        ("reduced", solve_steady_reduced),
        ("full", solve_steady_full),
    ];
    for (name, solve) in solvers {
        let sol = solve(&params)?;
        let obs = observables(&params, &sol.state)?;
        let st = &sol.state;
        let mut row = vec![
            Cell::from(name),
            sol.residual.into(),
            obs.power.into(),
            closed.into(),
            rel_diff(obs.power, closed).into(),
            obs.hot_heat_flux.into(),
            obs.efficiency.into(),
            obs.coherence_current.into(),
            (st.trace() - 1.0).norm().into(),
            st.hermiticity_defect().into(),
            st.min_eigenvalue().into(),
        ];
        for r in Level::ALL {
            for c in Level::ALL {
                let z = st.entry(r, c);
                row.push(z.re.into());
                row.push(z.im.into());
            }
        }
        report.push(row);
    }
    Ok(report)
}

/// Closed-form and numerical power on every grid point; failing points are
/// flagged in the `status` column.
pub fn cmd_power_sweep(cfg: &RunConfig) -> Result<Report> {
    let sweep = cfg.sweep.unwrap_or(Sweep {
        var: SweepVar::P,
        lo: -1.0,
        hi: 1.0,
        count: 101,
    });
    let rel_tol = cfg.tolerances.rel;
    let mut report = Report::new(
        "power-sweep",
        &[
            sweep.var.name(),
            "power_closed_form",
            "power_numeric",
            "rel_diff",
            "status",
        ],
    );
    report
        .meta("params", params_meta(&cfg.params))
        .meta(
            "sweep",
            format!(
                "{}:{}:{}:{}",
                sweep.var.name(),
                sweep.lo,
                sweep.hi,
                sweep.count
            ),
        )
        .meta("rel_tol", rel_tol);

    let rows: Vec<Vec<Cell>> = sweep
        .values()
        .par_iter()
        .map(|&v| {
            let point = sweep.var.apply(&cfg.params, v);
            let closed = power_closed_form(&point);
            let numeric =
                solve_steady_reduced(&point).and_then(|s| power_from_state(&point, &s.state));
            match (closed, numeric) {
                (Ok(a), Ok(b)) => {
                    let d = rel_diff(a, b);
                    let ok = d <= rel_tol || (a - b).abs() <= ABS_FLOOR;
                    vec![
                        v.into(),
                        a.into(),
                        b.into(),
                        d.into(),
                        Cell::from(if ok { "ok" } else { "mismatch" }),
                    ]
                }
                (a, b) => {
                    let err = a
                        .as_ref()
                        .err()
                        .or(b.as_ref().err())
                        .map(|e| e.to_string())
                        .unwrap_or_default();
                    vec![
                        v.into(),
                        Cell::opt(a.ok()),
                        Cell::opt(b.ok()),
                        Cell::Empty,
                        Cell::from(format!("error: {err}")),
                    ]
                }
            }
        })
        .collect();
    for row in rows {
        report.push(row);
    }
    Ok(report)
}

/// Numerical optimum under a scheme, compared with its analytic counterpart
/// where one exists.
pub fn cmd_optimize(cfg: &RunConfig) -> Result<Report> {
    let params = engine_params(cfg)?;
    let scheme = cfg.scheme.unwrap_or(Scheme::OverP);
    let model = cfg.model.unwrap_or(PowerModel::Full);
    let eta = params.carnot()?;
    let tol = cfg.tolerances.argmax;
    let supported = match model {
        PowerModel::LowT => scheme == Scheme::TwoParam,
        PowerModel::StrongHt => scheme != Scheme::TwoParam,
        PowerModel::Full => true,
    };
    if !supported {
        return Err(Error::Config(format!(
            "scheme {} is not available for the {} power model",
            scheme.name(),
            model.name()
        )));
    }
    let emp = emp_numeric(&params, scheme, model)?;
    let opt = &emp.optimum;

    let mut report = Report::new(
        "optimize",
        &["quantity", "numeric", "analytic", "abs_diff", "status"],
    );
    report
        .meta("params", params_meta(&params))
        .meta("scheme", scheme.name())
        .meta("model", model.name())
        .meta("carnot", eta)
        .meta("evaluations", opt.evaluations as u64)
        .meta("converged", opt.converged)
        .meta("warnings", opt.warnings.join("; "));

    let mut compare = |name: &str, numeric: f64, analytic: Option<f64>, claim: bool| {
        let row = match analytic {
            Some(a) => {
                let d = (numeric - a).abs();
                vec![
                    name.into(),
                    numeric.into(),
                    a.into(),
                    d.into(),
                    if claim {
                        status(d <= tol)
                    } else {
                        "info".into()
                    },
                ]
            }
            None => vec![
                name.into(),
                numeric.into(),
                Cell::Empty,
                Cell::Empty,
                "info".into(),
            ],
        };
        report.push(row);
    };

    match (scheme, model) {
        (Scheme::OverP, _) => {
            let analytic = match model {
                PowerModel::Full => Some(optimal_p(&params)?),
                _ => None,
            };
            let interior = analytic.as_ref().is_some_and(|a| a.is_interior());
            compare("p", opt.argmax[0], analytic.map(|a| a.value), interior);
        }
        (Scheme::TwoParam, PowerModel::LowT) => {
            let (x, y) = low_t_optimum(eta);
            compare("x", emp.omega_c / params.t_c, Some(x), true);
            compare("y", emp.omega_h / params.t_h, Some(y), true);
        }
        (Scheme::FixedWh, _) => compare("omega_c", emp.omega_c, None, false),
        (Scheme::FixedWc, _) => compare("omega_h", emp.omega_h, None, false),
        _ => {
            compare("omega_c", emp.omega_c, None, false);
            compare("omega_h", emp.omega_h, None, false);
        }
    }
    compare("max_power", opt.max_value, None, false);
    let analytic_emp = match (scheme, model) {
        (Scheme::TwoParam, PowerModel::LowT) => Some(emp_low_t(eta)),
        (Scheme::FixedWh, PowerModel::StrongHt) => Some(emp_fixed_wh(eta, &params)?),
        _ => None,
    };
    compare(
        "efficiency",
        emp.efficiency,
        analytic_emp,
        analytic_emp.is_some(),
    );
    Ok(report)
}

fn default_series(kind: FluxKind) -> Option<(Scheme, PowerModel)> {
    match kind {
        FluxKind::General => Some((Scheme::TwoParam, PowerModel::Full)),
        FluxKind::LowT => Some((Scheme::TwoParam, PowerModel::LowT)),
        FluxKind::StrongCouplingHighT => Some((Scheme::FixedWh, PowerModel::StrongHt)),
        FluxKind::HighT => None,
    }
}

fn one_parameter(scheme: Scheme) -> Option<OneParameterScheme> {
    match scheme {
        Scheme::FixedWh => Some(OneParameterScheme::FixedWh),
        Scheme::FixedWc => Some(OneParameterScheme::FixedWc),
        Scheme::SumConstraint => Some(OneParameterScheme::SumConstraint),
        _ => None,
    }
}

/// Symmetry defect, operating point, second-order coefficient and fitted
/// efficiency series of one flux, each checked against its expected value.
pub fn cmd_universality(cfg: &RunConfig) -> Result<Report> {
    let params = cfg.params;
    let kind = cfg.kind;
    let tol = cfg.tolerances;
    let (g_c, q_h) = (params.gamma_c, (1.0 + params.p) * params.gamma_h);
    let balanced = rel_diff(g_c, q_h) <= 1e-12;
    let symmetric_claim = match kind {
        FluxKind::HighT | FluxKind::StrongCouplingHighT => balanced,
        FluxKind::LowT => true,
        FluxKind::General => false,
    };

    let defect = symmetry_defect(kind, &params, cfg.samples)?;
    let alpha = match solve_alpha(&params, kind) {
        Ok(a) => Some(a),
        Err(Error::NoRoot { .. })
            if matches!(kind, FluxKind::HighT | FluxKind::StrongCouplingHighT) =>
        {
            None
        }
        Err(e) => return Err(e),
    };
    let c2 = emp_second_order(&params, kind)?;

    let series_choice = match (cfg.scheme, cfg.model) {
        (Some(s), Some(m)) => Some((s, m)),
        (None, None) => default_series(kind),
        _ => {
            return Err(Error::Config(
                "give both --scheme and --model, or neither".into(),
            ))
        }
    };
    let series = series_choice
        .map(|(s, m)| extract_emp_series(&params, s, m).map(|r| (s, m, r)))
        .transpose()?;

    let mut report = Report::new(
        "universality",
        &["quantity", "value", "expected", "tolerance", "status"],
    );
    report
        .meta("params", params_meta(&params))
        .meta("kind", kind.name())
        .meta("samples", cfg.samples as u64)
        .meta("symmetric", defect.max_defect <= tol.defect)
        .meta("worst_x", defect.worst.0)
        .meta("worst_y", defect.worst.1);
    if alpha.is_none() {
        report.meta(
            "alpha_note",
            "no finite operating point; second-order coefficient is the x -> 0 limit",
        );
    }
    if let Some((s, m, _)) = &series {
        report
            .meta("series_scheme", s.name())
            .meta("series_model", m.name());
    }

    let mut check = |name: &str, value: Option<f64>, expected: Option<f64>, t: f64, claim: bool| {
        let st = match (value, expected) {
            (Some(v), Some(e)) if claim => status((v - e).abs() <= t),
            _ => "info".into(),
        };
        let t = if expected.is_some() {
            Cell::Num(t)
        } else {
            Cell::Empty
        };
        report.push(vec![
            name.into(),
            Cell::opt(value),
            Cell::opt(expected),
            t,
            st,
        ]);
    };

    check(
        "symmetry_defect",
        Some(defect.max_defect),
        Some(0.0),
        tol.defect,
        symmetric_claim,
    );
    let alpha_expected = (kind == FluxKind::LowT).then_some(2.0);
    check(
        "alpha",
        alpha,
        alpha_expected,
        ALPHA_CHECK,
        alpha_expected.is_some(),
    );
    let (c2_expected, c2_claim) = if kind == FluxKind::HighT && params.gamma_c == params.gamma_h {
        let p = params.p;
        (Some((1.0 + p) / (4.0 * (2.0 + p))), true)
    } else {
        (Some(0.125), symmetric_claim)
    };
    check(
        "second_order",
        Some(c2),
        c2_expected,
        tol.coefficient,
        c2_claim,
    );

    if let Some((s, m, fit)) = series {
        check("series_c1", Some(fit.c1), Some(0.5), tol.coefficient, true);
        let taylor = match (one_parameter(s), m) {
            (Some(one), PowerModel::StrongHt) => Some(taylor_one_parameter(one, &params)?),
            _ => None,
        };
        let (e2, claim2, e3) = match (taylor, m) {
            (Some(t), _) => (Some(t.c2), true, t.c3),
            (None, PowerModel::LowT) => (Some(0.125), true, Some(7.0 / 96.0)),
            (None, _) => (Some(0.125), symmetric_claim, None),
        };
        check("series_c2", Some(fit.c2), e2, tol.coefficient, claim2);
        check("series_c3", Some(fit.c3), e3, tol.coefficient, false);
        check("series_residual", Some(fit.residual), None, 0.0, false);
    }
    Ok(report)
}

/// Power against p on [-1, 1] (101 points) for each coupling in `cfg.curves`.
pub fn cmd_fig2(cfg: &RunConfig) -> Result<Report> {
    let grid = Sweep {
        var: SweepVar::P,
        lo: -1.0,
        hi: 1.0,
        count: 101,
    }
    .values();
    let mut report = Report::new("fig2", &["lambda", "p", "power"]);
    report.meta("params", params_meta(&cfg.params));
    for &lambda in &cfg.curves {
        for &p in &grid {
            let power = power_closed_form(&cfg.params.with_lambda(lambda).with_p(p))?;
            report.push(vec![lambda.into(), p.into(), power.into()]);
        }
    }
    Ok(report)
}

/// Strong-drive efficiency at maximum power, ω_h fixed, against Carnot
/// efficiency in [0, 0.99] for each p in `cfg.curves`.
pub fn cmd_fig3(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("fig3", &["p", "eta_c", "emp"]);
    report.meta("params", params_meta(&cfg.params));
    for &p in &cfg.curves {
        let params = cfg.params.with_p(p);
        for i in 0..100 {
            let eta = i as f64 / 100.0;
            let emp = if i == 0 {
                0.0
            } else {
                emp_fixed_wh(eta, &params)?
            };
            report.push(vec![p.into(), eta.into(), emp.into()]);
        }
    }
    Ok(report)
}
