// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::params::{require_valid, EngineParams};

use super::density::{Complex64, DensityMatrix, StateTolerance};
use super::master::MasterEquation;

/// Invariant drift tolerated during integration.
pub const DRIFT_TOLERANCE: StateTolerance = StateTolerance {
    hermiticity: 1e-6,
    trace: 1e-6,
    positivity: 1e-6,
};

#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub time: f64,
    pub state: DensityMatrix,
}

/// States at every integration step, starting with the initial state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points
            .last()
            .expect("trajectory always holds the initial state")
    }
}

/// Fixed-step RK4 integration of the master equation.
///
/// Meant for checking that a steady state attracts nearby states. The last
/// step is shortened so the trajectory ends exactly at `horizon`.
pub fn evolve(
    params: &EngineParams,
    rho0: &DensityMatrix,
    horizon: f64,
    step: f64,
) -> Result<Trajectory> {
    require_valid(params)?;
    if !(step > 0.0) || !(horizon >= step) || !horizon.is_finite() {
        return Err(Error::domain(format!(
            "evolve needs step > 0 and horizon >= step (got step={step}, horizon={horizon})"
        )));
    }
    rho0.check(DRIFT_TOLERANCE)?;

    let eq = MasterEquation::new(params)?;
    let steps = (horizon / step).ceil() as usize;
    let mut points = Vec::with_capacity(steps + 1);
    let mut rho = *rho0.matrix();
    let mut time = 0.0;
    points.push(TrajectoryPoint { time, state: *rho0 });

    for k in 0..steps {
        let h = if k + 1 == steps { horizon - time } else { step };
        let c = |v: f64| Complex64::new(v, 0.0);
        let k1 = eq.apply(&rho);
        let k2 = eq.apply(&(rho + k1 * c(0.5 * h)));
        let k3 = eq.apply(&(rho + k2 * c(0.5 * h)));
        let k4 = eq.apply(&(rho + k3 * c(h)));
        rho += (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(h / 6.0);
        time = if k + 1 == steps { horizon } else { time + h };

        let state = DensityMatrix::from_matrix(rho);
        let defect = state.invariant_defect(DRIFT_TOLERANCE);
        if defect > 1.0 {
            return Err(Error::StepSize { time, step, defect });
        }
        points.push(TrajectoryPoint { time, state });
    }
    Ok(Trajectory { points })
}
