// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{Complex, Matrix4};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// A 4×4 complex operator on the engine's Hilbert space.
pub type Operator = Matrix4<Complex64>;

/// Basis states in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Ground state |g>.
    G = 0,
    /// Intermediate level |0>, cold-coupled to |g>.
    Zero = 1,
    /// First degenerate upper level |1>.
    One = 2,
    /// Second degenerate upper level |2>.
    Two = 3,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::G, Level::Zero, Level::One, Level::Two];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// |row><col| as a matrix.
pub fn ket_bra(row: Level, col: Level) -> Operator {
    let mut m = Operator::zeros();
    m[(row.index(), col.index())] = Complex64::new(1.0, 0.0);
    m
}

/// Tolerances for the three state invariants.
#[derive(Debug, Clone, Copy)]
pub struct StateTolerance {
    pub hermiticity: f64,
    pub trace: f64,
    /// Smallest eigenvalue may not go below `-positivity`.
    pub positivity: f64,
}

impl StateTolerance {
    /// Tolerances a steady-state solution must meet.
    pub const STEADY: StateTolerance = StateTolerance {
        hermiticity: 1e-12,
        trace: 1e-12,
        positivity: 1e-10,
    };
}

/// Density matrix in the basis (g, 0, 1, 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: Operator,
}

impl DensityMatrix {
    /// Wraps a matrix without checking it; see [`DensityMatrix::check`].
    pub fn from_matrix(entries: Operator) -> Self {
        DensityMatrix { entries }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            entries: Operator::identity() * Complex64::new(0.25, 0.0),
        }
    }

    pub fn matrix(&self) -> &Operator {
        &self.entries
    }

    pub fn entry(&self, row: Level, col: Level) -> Complex64 {
        self.entries[(row.index(), col.index())]
    }

    pub fn population(&self, level: Level) -> f64 {
        self.entry(level, level).re
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// max |ρ_ij − conj(ρ_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.entries;
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let hermitian = (self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        hermitian.symmetric_eigenvalues().min()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (self.entries - other.entries)
            .iter()
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Worst violation of the three invariants, each scaled by its tolerance.
    /// A value ≤ 1 means every invariant holds.
    pub fn invariant_defect(&self, tol: StateTolerance) -> f64 {
        let herm = self.hermiticity_defect() / tol.hermiticity;
        let trace = (self.trace() - Complex64::new(1.0, 0.0)).norm() / tol.trace;
        let pos = (-self.min_eigenvalue()).max(0.0) / tol.positivity;
        herm.max(trace).max(pos)
    }

    pub fn check(&self, tol: StateTolerance) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > tol.hermiticity {
            return Err(Error::InconsistentState(format!(
                "hermiticity defect {herm:.3e} exceeds {:.0e}",
                tol.hermiticity
            )));
        }
        let trace = (self.trace() - Complex64::new(1.0, 0.0)).norm();
        if trace > tol.trace {
            return Err(Error::InconsistentState(format!(
                "trace defect {trace:.3e} exceeds {:.0e}",
                tol.trace
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -tol.positivity {
            return Err(Error::InconsistentState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }
}

impl Serialize for DensityMatrix {
    /// Serialized as `{"re": [[..4]; 4], "im": [[..4]; 4]}`, row-major.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..4)
                .map(|i| (0..4).map(|j| part(&self.entries[(i, j)])).collect())
                .collect()
        };
        let mut s = serializer.serialize_struct("DensityMatrix", 2)?;
        s.serialize_field("re", &rows(|z| z.re))?;
        s.serialize_field("im", &rows(|z| z.im))?;
        s.end()
    }
}
