// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Vectorized Liouvillian and the nullspace steady-state solver.
//!
//! Operators are vectorized column-stacked, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
//! The real embedding uses 16 coordinates per Hermitian matrix: the four
//! populations followed by (Re, Im) of each upper-triangle entry.

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};
use crate::params::{require_valid, EngineParams};

use super::density::{Complex64, DensityMatrix, Operator};
use super::master::{MasterEquation, TermGroup};
use super::{SolverMethod, SteadyStateSolution};

pub type Superoperator = SMatrix<Complex64, 16, 16>;
pub type RealSuperoperator = SMatrix<f64, 16, 16>;
pub type RealCoordinates = SVector<f64, 16>;

const UPPER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Singular-value ratio below which a second stationary state is declared.
const DEGENERACY_THRESHOLD: f64 = 1e-12;

fn vec_op(m: &Operator) -> SVector<Complex64, 16> {
    SVector::from_iterator(m.iter().copied())
}

fn unvec(v: &SVector<Complex64, 16>) -> Operator {
    Operator::from_iterator(v.iter().copied())
}

/// Superoperator of `X ↦ A X B`.
pub fn sandwich(a: &Operator, b: &Operator) -> Superoperator {
    b.transpose().kronecker(a)
}

/// Superoperator of `ρ ↦ rate (A ρ B† − ½{B†A, ρ})`.
pub fn dissipator_superop(a: &Operator, b: &Operator, rate: f64) -> Superoperator {
    let id = Operator::identity();
    let b_dag = b.adjoint();
    let b_dag_a = b_dag * a;
    let half = Complex64::new(0.5, 0.0);
    (sandwich(a, &b_dag) - (sandwich(&b_dag_a, &id) + sandwich(&id, &b_dag_a)) * half)
        * Complex64::new(rate, 0.0)
}

/// Superoperator of `ρ ↦ −i[H, ρ]`.
pub fn commutator_superop(h: &Operator) -> Superoperator {
    let id = Operator::identity();
    (sandwich(h, &id) - sandwich(&id, h)) * Complex64::new(0.0, -1.0)
}

/// Real coordinates of a Hermitian matrix (the anti-Hermitian part is dropped).
pub fn to_real(m: &Operator) -> RealCoordinates {
    let mut c = RealCoordinates::zeros();
    for i in 0..4 {
        c[i] = m[(i, i)].re;
    }
    for (k, &(i, j)) in UPPER.iter().enumerate() {
        c[4 + 2 * k] = m[(i, j)].re;
        c[5 + 2 * k] = m[(i, j)].im;
    }
    c
}

/// Hermitian matrix with the given real coordinates.
pub fn from_real(c: &RealCoordinates) -> Operator {
    let mut m = Operator::zeros();
    for i in 0..4 {
        m[(i, i)] = Complex64::new(c[i], 0.0);
    }
    for (k, &(i, j)) in UPPER.iter().enumerate() {
        let z = Complex64::new(c[4 + 2 * k], c[5 + 2 * k]);
        m[(i, j)] = z;
        m[(j, i)] = z.conj();
    }
    m
}

/// The full generator, kept split by physical origin.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub coherent: Superoperator,
    pub cold: Superoperator,
    pub hot_diagonal: Superoperator,
    /// Noise-induced cross terms; zero when p = 0.
    pub hot_cross: Superoperator,
}

impl Liouvillian {
    pub fn complex(&self) -> Superoperator {
        self.coherent + self.cold + self.hot_diagonal + self.hot_cross
    }

    /// The generator as a real-linear map on the 16 Hermitian coordinates.
    pub fn real(&self) -> RealSuperoperator {
        let full = self.complex();
        let mut out = RealSuperoperator::zeros();
        for k in 0..16 {
            let basis = from_real(&RealCoordinates::from_fn(
                |i, _| if i == k { 1.0 } else { 0.0 },
            ));
            let image = unvec(&(full * vec_op(&basis)));
            out.set_column(k, &to_real(&image));
        }
        out
    }

    pub fn apply(&self, rho: &Operator) -> Operator {
        unvec(&(self.complex() * vec_op(rho)))
    }
}

/// Assembles the Liouvillian from the drive and jump operators.
pub fn full_liouvillian(params: &EngineParams) -> Result<Liouvillian> {
    require_valid(params)?;
    let eq = MasterEquation::new(params)?;
    let mut groups = [Superoperator::zeros(); 3];
    for (group, term) in &eq.terms {
        let slot = match group {
            TermGroup::Cold => 0,
            TermGroup::HotDiagonal => 1,
            TermGroup::HotCross => 2,
        };
        groups[slot] += dissipator_superop(&term.a, &term.b, term.rate);
    }
    Ok(Liouvillian {
        coherent: commutator_superop(&eq.drive),
        cold: groups[0],
        hot_diagonal: groups[1],
        hot_cross: groups[2],
    })
}

/// Steady state as the normalized null vector of the real Liouvillian.
///
/// The ρ_gg population row is replaced by the trace constraint.
pub fn solve_steady_full(params: &EngineParams) -> Result<SteadyStateSolution> {
    let generator = full_liouvillian(params)?.real();

    let singular = generator.singular_values();
    let s_max = singular.max();
    let mut sorted: Vec<f64> = singular.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    if sorted[1] <= DEGENERACY_THRESHOLD * s_max {
        return Err(Error::DegenerateSteadyState {
            point: params.describe(),
            reason: format!(
                "second-smallest singular value {:.3e} (largest {:.3e})",
                sorted[1], s_max
            ),
        });
    }

    let mut system = generator;
    let mut rhs = RealCoordinates::zeros();
    for k in 0..16 {
        system[(0, k)] = if k < 4 { 1.0 } else { 0.0 };
    }
    rhs[0] = 1.0;
    let coords = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateSteadyState {
            point: params.describe(),
            reason: "trace-constrained system is singular".into(),
        })?;

    let state = DensityMatrix::from_matrix(from_real(&coords));
    let residual = super::residual(params, &state)?;
    Ok(SteadyStateSolution {
        state,
        residual,
        method: SolverMethod::Full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::density::{ket_bra, Level};
    use crate::liouvillian::master::drive_hamiltonian;

    fn pseudo_random_hermitian(seed: u64) -> Operator {
        let mut s = seed ^ 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let m = Operator::from_fn(|_, _| Complex64::new(next(), next()));
        m + m.adjoint()
    }

    #[test]
    fn trace_is_preserved_on_random_hermitian_states() {
        let params = EngineParams::power_curve_defaults(0.2, 0.5);
        let l = full_liouvillian(&params).unwrap();
        for seed in 1..=20 {
            let out = l.apply(&pseudo_random_hermitian(seed));
            assert!(out.trace().norm() < 1e-12);
        }
        // in real coordinates: the population rows sum to zero column-wise
        let real = l.real();
        for k in 0..16 {
            let col_trace: f64 = (0..4).map(|i| real[(i, k)]).sum();
            assert!(col_trace.abs() < 1e-12);
        }
    }

    #[test]
    fn zero_coherence_parameter_leaves_three_independent_dissipators() {
        let params = EngineParams::power_curve_defaults(0.2, 0.0);
        let l = full_liouvillian(&params).unwrap();
        assert_eq!(l.hot_cross, Superoperator::zeros());

        let occ = params.occupations().unwrap();
        let a_c = ket_bra(Level::G, Level::Zero);
        let a_1 = ket_bra(Level::G, Level::One);
        let a_2 = ket_bra(Level::G, Level::Two);
        let bath = |a: &Operator, gamma: f64, n: f64| {
            dissipator_superop(a, a, gamma * (n + 1.0))
                + dissipator_superop(&a.adjoint(), &a.adjoint(), gamma * n)
        };
        let expected = commutator_superop(&drive_hamiltonian(0.2))
            + bath(&a_c, params.gamma_c, occ.n_c)
            + bath(&a_1, params.gamma_h, occ.n_h)
            + bath(&a_2, params.gamma_h, occ.n_h);
        assert!((l.complex() - expected).norm() < 1e-14);
    }

    #[test]
    fn superoperator_matches_operator_form() {
        let params = EngineParams::power_curve_defaults(0.3, -0.4);
        let l = full_liouvillian(&params).unwrap();
        let eq = MasterEquation::new(&params).unwrap();
        for seed in 0..5 {
            let rho = pseudo_random_hermitian(seed + 40);
            assert!((l.apply(&rho) - eq.apply(&rho)).norm() < 1e-13);
        }
    }

    #[test]
    fn real_embedding_round_trips() {
        let m = pseudo_random_hermitian(7);
        assert!((from_real(&to_real(&m)) - m).norm() < 1e-15);
    }

    #[test]
    fn dark_state_at_p_equal_one_is_reported() {
        // |1> - |2> decouples from both the bath and the drive
        let params = EngineParams::power_curve_defaults(0.2, 1.0);
        match solve_steady_full(&params) {
            Err(Error::DegenerateSteadyState { .. }) => {}
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }
}
