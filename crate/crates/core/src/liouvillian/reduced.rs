// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Steady state from the hand-reduced equations of motion.
//!
//! Unknowns, in order: ρ_11, ρ_22, ρ_00, Re ρ_12, Im ρ_12, Re ρ_10, Im ρ_10,
//! Re ρ_20, Im ρ_20. The ground population is eliminated through the trace
//! and the ground-state coherences, which decouple and decay, are set to zero.

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};
use crate::params::{require_valid, BathOccupations, EngineParams};

use super::density::{Complex64, DensityMatrix, Level, Operator};
use super::master::tracked_rhs;
use super::{SolverMethod, SteadyStateSolution};

pub type ReducedMatrix = SMatrix<f64, 9, 9>;
pub type ReducedVector = SVector<f64, 9>;

/// Condition-number ceiling for the 9×9 system.
pub const MAX_CONDITION: f64 = 1e14;

/// `matrix · u = rhs` encodes dρ/dt = 0 for the tracked elements.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub matrix: ReducedMatrix,
    pub rhs: ReducedVector,
}

/// Density matrix built from the nine unknowns.
pub fn state_from_unknowns(u: &ReducedVector) -> Operator {
    let mut m = Operator::zeros();
    let mut set = |r: Level, c: Level, z: Complex64| {
        m[(r.index(), c.index())] = z;
        m[(c.index(), r.index())] = z.conj();
    };
    let (g, l0, l1, l2) = (Level::G, Level::Zero, Level::One, Level::Two);
    set(l1, l1, Complex64::new(u[0], 0.0));
    set(l2, l2, Complex64::new(u[1], 0.0));
    set(l0, l0, Complex64::new(u[2], 0.0));
    set(g, g, Complex64::new(1.0 - u[0] - u[1] - u[2], 0.0));
    set(l1, l2, Complex64::new(u[3], u[4]));
    set(l1, l0, Complex64::new(u[5], u[6]));
    set(l2, l0, Complex64::new(u[7], u[8]));
    m
}

fn residual_vector(
    params: &EngineParams,
    occ: BathOccupations,
    u: &ReducedVector,
) -> ReducedVector {
    let d = tracked_rhs(params, occ, &state_from_unknowns(u));
    ReducedVector::from_column_slice(&[
        d.rho_11.re,
        d.rho_22.re,
        d.rho_00.re,
        d.rho_12.re,
        d.rho_12.im,
        d.rho_10.re,
        d.rho_10.im,
        d.rho_20.re,
        d.rho_20.im,
    ])
}

/// Linear system for the steady state of the tracked elements.
///
/// The equations are affine in the unknowns, so the matrix is read off
/// column by column from the hand-coded right-hand sides.
pub fn reduced_system(params: &EngineParams) -> Result<ReducedSystem> {
    require_valid(params)?;
    let occ = params.occupations()?;
    let offset = residual_vector(params, occ, &ReducedVector::zeros());
    let mut matrix = ReducedMatrix::zeros();
    for j in 0..9 {
        let mut unit = ReducedVector::zeros();
        unit[j] = 1.0;
        matrix.set_column(j, &(residual_vector(params, occ, &unit) - offset));
    }
    Ok(ReducedSystem {
        matrix,
        rhs: -offset,
    })
}

impl ReducedSystem {
    /// 2-norm condition number from the singular values.
    pub fn condition_number(&self) -> f64 {
        let s = self.matrix.singular_values();
        let min = s.min();
        if min == 0.0 {
            f64::INFINITY
        } else {
            s.max() / min
        }
    }

    /// Solves by LU with partial pivoting.
    pub fn solve(&self) -> Option<ReducedVector> {
        self.matrix.lu().solve(&self.rhs)
    }
}

pub fn solve_steady_reduced(params: &EngineParams) -> Result<SteadyStateSolution> {
    let system = reduced_system(params)?;
    let cond = system.condition_number();
    let fail = |reason: String| Error::Solver {
        point: params.describe(),
        reason,
    };
    if !(cond <= MAX_CONDITION) {
        return Err(fail(format!(
            "condition estimate {cond:.3e} exceeds {MAX_CONDITION:.0e}"
        )));
    }
    let u = system
        .solve()
        .ok_or_else(|| fail("singular reduced system".into()))?;
    let state = DensityMatrix::from_matrix(state_from_unknowns(&u));
    let residual = super::residual(params, &state)?;
    Ok(SteadyStateSolution {
        state,
        residual,
        method: SolverMethod::Reduced,
    })
}
