// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

use super::OptimizationResult;

/// Size of the audit grid evaluated before the golden-section search.
pub const AUDIT_POINTS: usize = 64;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_ITERATIONS: usize = 500;

/// Maximizes `objective` on `[lo, hi]` down to a bracket of width `tol`.
///
/// The objective is first sampled on a uniform grid of [`AUDIT_POINTS`]
/// points. The golden-section search then runs inside the two grid cells
/// around the best sample. More than one local maximum on the grid is
/// reported as a warning. The bracket width never goes below a few ulps of
/// the bracket position, whatever `tol` asks for.
pub fn maximize_1d<F>(objective: F, lo: f64, hi: f64, tol: f64) -> Result<OptimizationResult>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "maximize_1d needs lo < hi (got [{lo}, {hi}])"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "maximize_1d needs tol > 0 (got {tol})"
        )));
    }

    let mut evaluations = 0;
    let mut eval = |z: f64| {
        evaluations += 1;
        objective(z)
    };

    let step = (hi - lo) / (AUDIT_POINTS - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..AUDIT_POINTS)
        .map(|i| {
            let z = if i + 1 == AUDIT_POINTS {
                hi
            } else {
                lo + step * i as f64
            };
            (z, eval(z))
        })
        .collect();
    if let Some(&(z, _)) = grid.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::domain(format!("objective is not finite at {z}")));
    }

    let mut warnings = Vec::new();
    let peaks = local_maxima(&grid);
    if peaks > 1 {
        warnings.push(format!(
            "audit grid shows {peaks} local maxima; result may not be global"
        ));
    }

    let best = grid
        .iter()
        .enumerate()
        .fold(0, |b, (i, &(_, v))| if v > grid[b].1 { i } else { b });
    let mut a = grid[best.saturating_sub(1)].0;
    let mut b = grid[(best + 1).min(AUDIT_POINTS - 1)].0;

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let floor = 4.0 * f64::EPSILON * a.abs().max(b.abs());
        if b - a <= tol.max(floor) {
            converged = true;
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d);
        }
    }

    let z = 0.5 * (a + b);
    let value = eval(z);
    if !value.is_finite() {
        return Err(Error::domain(format!("objective is not finite at {z}")));
    }
    if !converged {
        warnings.push(format!("bracket [{a}, {b}] still wider than {tol}"));
    }
    Ok(OptimizationResult {
        argmax: vec![z],
        max_value: value,
        evaluations,
        converged,
        scheme: None,
        warnings,
    })
}

fn local_maxima(grid: &[(f64, f64)]) -> usize {
    let v: Vec<f64> = grid.iter().map(|&(_, v)| v).collect();
    let n = v.len();
    (0..n)
        .filter(|&i| {
            let left = i == 0 || v[i] > v[i - 1];
            let right = i + 1 == n || v[i] >= v[i + 1];
            left && right
        })
        .count()
}
