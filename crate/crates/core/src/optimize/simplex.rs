// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

use super::OptimizationResult;

/// Evaluation budget of [`maximize_2d`], shared by both runs.
pub const DEFAULT_BUDGET: usize = 20_000;

type Point = [f64; 2];

struct Run {
    best: Point,
    value: f64,
    converged: bool,
}

fn diameter(s: &[Point; 3]) -> f64 {
    let d = |a: Point, b: Point| (a[0] - b[0]).hypot(a[1] - b[1]);
    d(s[0], s[1]).max(d(s[0], s[2])).max(d(s[1], s[2]))
}

fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// One Nelder-Mead run minimizing `f`. Standard coefficients.
fn nelder_mead<F>(
    f: &mut F,
    init: Point,
    scale: f64,
    tol: f64,
    used: &mut usize,
    limit: usize,
) -> Run
where
    F: FnMut(Point) -> f64,
{
    let mut eval = |p: Point, used: &mut usize| {
        *used += 1;
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut s = [init, [init[0] + scale, init[1]], [init[0], init[1] + scale]];
    let mut v = [eval(s[0], used), eval(s[1], used), eval(s[2], used)];
    let mut converged = false;

    while *used < limit {
        // order: s[0] best, s[2] worst; stable on ties
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);
        if diameter(&s) <= tol {
            converged = true;
            break;
        }

        let centroid = lerp(s[0], s[1], 0.5);
        let reflected = lerp(s[2], centroid, 2.0);
        let fr = eval(reflected, used);
        if fr < v[0] {
            let expanded = lerp(s[2], centroid, 3.0);
            let fe = eval(expanded, used);
            if fe < fr {
                (s[2], v[2]) = (expanded, fe);
            } else {
                (s[2], v[2]) = (reflected, fr);
            }
        } else if fr < v[1] {
            (s[2], v[2]) = (reflected, fr);
        } else {
            let (contracted, fk) = if fr < v[2] {
                let p = lerp(s[2], centroid, 1.5);
                (p, eval(p, used))
            } else {
                let p = lerp(s[2], centroid, 0.5);
                (p, eval(p, used))
            };
            if fk < v[2].min(fr) {
                (s[2], v[2]) = (contracted, fk);
            } else {
                for k in 1..3 {
                    s[k] = lerp(s[0], s[k], 0.5);
                    v[k] = eval(s[k], used);
                }
            }
        }
    }
    let b = (0..3).fold(0, |b, i| if v[i] < v[b] { i } else { b });
    Run {
        best: s[b],
        value: v[b],
        converged,
    }
}

/// Maximizes `objective(a, b)` starting from `init` with initial simplex edge
/// `scale`, stopping when the simplex diameter drops to `tol`.
///
/// After convergence the search restarts once from the optimum with the
/// same edge length; the second result is returned. Exhausting the
/// [`DEFAULT_BUDGET`] yields [`Error::NotConverged`] with the best point.
pub fn maximize_2d<F>(
    objective: F,
    init: [f64; 2],
    scale: f64,
    tol: f64,
) -> Result<OptimizationResult>
where
    F: Fn(f64, f64) -> f64,
{
    maximize_2d_with_budget(objective, init, scale, tol, DEFAULT_BUDGET)
}

pub fn maximize_2d_with_budget<F>(
    objective: F,
    init: [f64; 2],
    scale: f64,
    tol: f64,
    budget: usize,
) -> Result<OptimizationResult>
where
    F: Fn(f64, f64) -> f64,
{
    if !(scale > 0.0) || !(tol > 0.0) || !init.iter().all(|z| z.is_finite()) {
        return Err(Error::domain(format!(
            "maximize_2d needs finite init, scale > 0 and tol > 0 (got {init:?}, {scale}, {tol})"
        )));
    }
    if !objective(init[0], init[1]).is_finite() {
        return Err(Error::domain(format!(
            "objective is not finite at {init:?}"
        )));
    }
    let mut used = 0;
    let mut neg = |p: Point| -objective(p[0], p[1]);
    let first = nelder_mead(&mut neg, init, scale, tol, &mut used, budget);
    let run = if first.converged {
        nelder_mead(&mut neg, first.best, scale, tol, &mut used, budget)
    } else {
        first
    };

    let value = objective(run.best[0], run.best[1]);
    let result = OptimizationResult {
        argmax: run.best.to_vec(),
        max_value: value,
        evaluations: used,
        converged: run.converged,
        scheme: None,
        warnings: Vec::new(),
    };
    debug_assert!(run.value.is_infinite() || -run.value == value);
    if run.converged {
        Ok(result)
    } else {
        Err(Error::NotConverged {
            best: Box::new(result),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = maximize_2d(
            |x, y| -(x - 1.0).powi(2) - (y - 3.0).powi(2),
            [0.0, 0.0],
            0.5,
            1e-8,
        )
        .unwrap();
        assert!((r.argmax[0] - 1.0).abs() < 1e-7 && (r.argmax[1] - 3.0).abs() < 1e-7);
        assert!(r.converged);
        assert_eq!(
            r.max_value,
            -(r.argmax[0] - 1.0).powi(2) - (r.argmax[1] - 3.0).powi(2)
        );
    }

    #[test]
    fn rosenbrock_valley() {
        let f = |x: f64, y: f64| -((1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2));
        let r = maximize_2d(f, [-1.2, 1.0], 0.1, 1e-10).unwrap();
        assert!((r.argmax[0] - 1.0).abs() < 1e-6 && (r.argmax[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_and_power_of_two_invariant() {
        let f = |x: f64, y: f64| -(x - 0.3).powi(2) - 2.0 * (y + 0.7).powi(2) + 0.1 * x * y;
        let a = maximize_2d(f, [1.0, 1.0], 0.25, 1e-9).unwrap();
        let b = maximize_2d(f, [1.0, 1.0], 0.25, 1e-9).unwrap();
        assert_eq!(a, b);
        let c = maximize_2d(|x, y| 4.0 * f(x, y), [1.0, 1.0], 0.25, 1e-9).unwrap();
        assert_eq!(a.argmax, c.argmax);
        assert_eq!(a.evaluations, c.evaluations);
    }

    #[test]
    fn budget_exhaustion_reports_best_point() {
        let f = |x: f64, y: f64| -(x - 1.0).powi(2) - (y - 3.0).powi(2);
        match maximize_2d_with_budget(f, [0.0, 0.0], 0.5, 1e-12, 30) {
            Err(Error::NotConverged { best }) => {
                assert!(!best.converged);
                assert!(best.evaluations >= 30);
                assert!(best.max_value > f(0.0, 0.0));
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
