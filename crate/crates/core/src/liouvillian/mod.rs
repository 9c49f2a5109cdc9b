// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Rotating-frame dynamics of the engine and its steady state.
//!
//! Two independent steady-state routes are provided:
//!
//! * [`solve_steady_reduced`] works from the hand-reduced equations for the
//!   seven matrix elements that couple to the drive (9 real unknowns);
//! * [`solve_steady_full`] assembles the 16×16 Liouvillian from the jump
//!   operators and extracts its normalized null vector.
//!
//! They share nothing beyond the bath occupations, which makes each one an
//! oracle for the other. [`evolve`] integrates the master equation in time and
//! is used only to confirm that the steady state attracts other states.

mod density;
mod evolve;
mod master;
mod reduced;
mod superop;

use serde::Serialize;

pub use density::{ket_bra, Complex64, DensityMatrix, Level, Operator, StateTolerance};
pub use evolve::{evolve, Trajectory, TrajectoryPoint, DRIFT_TOLERANCE};
pub use master::{
    drive_hamiltonian, tracked_rhs, DissipatorTerm, MasterEquation, TermGroup, TrackedDerivatives,
};
pub use reduced::{
    reduced_system, solve_steady_reduced, state_from_unknowns, ReducedSystem, MAX_CONDITION,
};
pub use superop::{
    commutator_superop, dissipator_superop, from_real, full_liouvillian, sandwich,
    solve_steady_full, to_real, Liouvillian, RealSuperoperator, Superoperator,
};

use crate::error::Result;
use crate::params::EngineParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Reduced,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct SteadyStateSolution {
    pub state: DensityMatrix,
    /// Max-norm of dρ/dt at `state`.
    pub residual: f64,
    pub method: SolverMethod,
}

/// Residual bound for a converged steady state.
pub const CONVERGED_RESIDUAL: f64 = 1e-10;

impl SteadyStateSolution {
    pub fn converged(&self) -> bool {
        self.residual <= CONVERGED_RESIDUAL
    }
}

/// Max-norm of the master-equation right-hand side at `state`.
pub fn residual(params: &EngineParams, state: &DensityMatrix) -> Result<f64> {
    let eq = MasterEquation::new(params)?;
    Ok(eq
        .apply(state.matrix())
        .iter()
        .fold(0.0, |acc, z| acc.max(z.norm())))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form steady coherence ρ_10 = ρ_20 in occupation-number form.
    fn coherence_oracle(params: &EngineParams) -> Complex64 {
        let occ = params.occupations().unwrap();
        let (nc, nh) = (occ.n_c, occ.n_h);
        let (gc, gh, lam, q) = (
            params.gamma_c,
            params.gamma_h,
            params.lambda,
            params.p + 1.0,
        );
        let a = q
            * gc
            * gh
            * (nh + 1.0)
            * (nc * (4.0 * nh + 2.0) + 3.0 * nh + 1.0)
            * (gc * (nc + 1.0) + q * gh * (nh + 1.0));
        let b = 8.0
            * lam
            * lam
            * (gc * (nc * (4.0 * nh + 3.0) + 2.0 * nh + 1.0)
                + q * gh * (4.0 * nh * nh + 5.0 * nh + 1.0));
        Complex64::new(
            0.0,
            -2.0 * lam * q * gc * gh * (nh + 1.0) * (nc - nh) / (a + b),
        )
    }

    #[test]
    fn reduced_solution_matches_closed_form_coherence() {
        for (lam, p) in [(0.2, 0.0), (0.1, 0.0), (0.2, 0.5), (0.3, -0.7)] {
            let params = EngineParams::power_curve_defaults(lam, p);
            let sol = solve_steady_reduced(&params).unwrap();
            let expected = coherence_oracle(&params);
            let r10 = sol.state.entry(Level::One, Level::Zero);
            let r20 = sol.state.entry(Level::Two, Level::Zero);
            assert!((r10 - expected).norm() <= 1e-10, "{r10} vs {expected}");
            assert!((r20 - r10).norm() <= 1e-12);
            assert!((sol.state.entry(Level::Zero, Level::One) - r10.conj()).norm() <= 1e-15);
            assert!(sol.converged());
        }
    }

    #[test]
    fn no_drive_gives_thermal_block_diagonal_state() {
        let params = EngineParams::power_curve_defaults(0.0, 0.4);
        for sol in [
            solve_steady_reduced(&params).unwrap(),
            solve_steady_full(&params).unwrap(),
        ] {
            let rho = &sol.state;
            for (r, c) in [(Level::One, Level::Zero), (Level::Two, Level::Zero)] {
                assert!(rho.entry(r, c).norm() < 1e-14);
            }
            // detailed balance on the cold transition: ρ_00/ρ_gg = n_c/(n_c+1)
            let occ = params.occupations().unwrap();
            let ratio = rho.population(Level::Zero) / rho.population(Level::G);
            assert!((ratio - occ.n_c / (occ.n_c + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_occupations_kill_the_coherence() {
        let params = EngineParams {
            omega_c: 10.0,
            t_c: 10.0,
            ..EngineParams::power_curve_defaults(0.2, 0.3)
        };
        let sol = solve_steady_reduced(&params).unwrap();
        assert!(sol.state.entry(Level::One, Level::Zero).norm() < 1e-15);
    }

    #[test]
    fn anti_aligned_dipoles_give_zero_coherence_current() {
        let params = EngineParams::power_curve_defaults(0.2, -1.0);
        for sol in [
            solve_steady_reduced(&params).unwrap(),
            solve_steady_full(&params).unwrap(),
        ] {
            let s = sol.state;
            let current = (s.entry(Level::Zero, Level::One) - s.entry(Level::One, Level::Zero))
                + (s.entry(Level::Zero, Level::Two) - s.entry(Level::Two, Level::Zero));
            assert!(current.norm() < 1e-14);
        }
    }

    #[test]
    fn both_solvers_agree_at_the_emp_curve_point() {
        let params = EngineParams::emp_curve_defaults(0.0).with_lambda(0.4);
        let a = solve_steady_reduced(&params).unwrap();
        let b = solve_steady_full(&params).unwrap();
        a.state.check(StateTolerance::STEADY).unwrap();
        b.state.check(StateTolerance::STEADY).unwrap();
        assert!(a.state.max_abs_diff(&b.state) < 1e-12);
        assert!(b.residual < 1e-14);
    }

    #[test]
    fn swapping_occupations_flips_the_coherence() {
        // x > y versus x < y with |n_c - n_h| swapped
        let params = EngineParams::power_curve_defaults(0.2, 0.3);
        let swapped = EngineParams {
            omega_c: params.omega_h * params.t_c / params.t_h,
            omega_h: params.omega_c * params.t_h / params.t_c,
            ..params
        };
        let occ = params.occupations().unwrap();
        let occ_s = swapped.occupations().unwrap();
        assert!((occ.n_c - occ_s.n_h).abs() < 1e-14 && (occ.n_h - occ_s.n_c).abs() < 1e-14);
        let im = solve_steady_full(&params)
            .unwrap()
            .state
            .entry(Level::One, Level::Zero)
            .im;
        let im_s = solve_steady_full(&swapped)
            .unwrap()
            .state
            .entry(Level::One, Level::Zero)
            .im;
        assert!(im > 0.0 && im_s < 0.0);
    }

    #[test]
    fn coherence_current_vanishes_linearly_near_anti_alignment() {
        let current = |p: f64| {
            let s = solve_steady_full(&EngineParams::power_curve_defaults(0.2, p))
                .unwrap()
                .state;
            s.entry(Level::One, Level::Zero).im + s.entry(Level::Two, Level::Zero).im
        };
        let (c1, c2) = (current(-1.0 + 1e-4), current(-1.0 + 2e-4));
        assert!((c2 / c1 - 2.0).abs() < 1e-3);
    }

    #[test]
    fn evolution_from_steady_state_is_stationary() {
        let params = EngineParams::power_curve_defaults(0.2, 0.5);
        let ss = solve_steady_full(&params).unwrap().state;
        let traj = evolve(&params, &ss, 10.0, 0.05).unwrap();
        let drift = traj.last().state.max_abs_diff(&ss);
        assert!(drift / 10.0 < 1e-10);
        assert!((traj.last().time - 10.0).abs() < 1e-15);
    }

    #[test]
    fn evolution_rejects_bad_steps() {
        let params = EngineParams::power_curve_defaults(0.2, 0.5);
        let rho = DensityMatrix::maximally_mixed();
        assert!(evolve(&params, &rho, 1.0, 0.0).is_err());
        assert!(evolve(&params, &rho, 0.01, 0.1).is_err());
        // a step far past the stability limit of RK4 blows up and is caught
        let stiff = EngineParams {
            lambda: 50.0,
            ..params
        };
        match evolve(&stiff, &rho, 100.0, 1.0) {
            Err(crate::Error::StepSize { .. }) => {}
            other => panic!("expected step-size error, got {other:?}"),
        }
    }
}
