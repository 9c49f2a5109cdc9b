// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Rotating-frame master equation in operator form, and the hand-reduced
//! equations of motion for the seven tracked matrix elements.

use crate::error::Result;
use crate::params::{BathOccupations, EngineParams};

use super::density::{ket_bra, Complex64, Level, Operator};

/// One Lindblad-type term `rate · (A ρ B† − ½{B†A, ρ})`. Diagonal terms have
/// `A = B`; the noise-induced cross terms pair the two hot jump operators.
#[derive(Debug, Clone, Copy)]
pub struct DissipatorTerm {
    pub rate: f64,
    pub a: Operator,
    pub b: Operator,
}

impl DissipatorTerm {
    fn apply(&self, rho: &Operator) -> Operator {
        let b_dag = self.b.adjoint();
        let b_dag_a = b_dag * self.a;
        let half = Complex64::new(0.5, 0.0);
        (self.a * rho * self.b.adjoint() - (b_dag_a * rho + rho * b_dag_a) * half)
            * Complex64::new(self.rate, 0.0)
    }
}

/// Which bath a dissipator term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermGroup {
    Cold,
    HotDiagonal,
    HotCross,
}

/// The generator `−i[V_R, ·] + L_h + L_c` assembled from its operators.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    /// Drive Hamiltonian V_R (in units of ħ).
    pub drive: Operator,
    pub terms: Vec<(TermGroup, DissipatorTerm)>,
}

/// V_R = λ(|1><0| + |2><0| + h.c.).
pub fn drive_hamiltonian(lambda: f64) -> Operator {
    let up = ket_bra(Level::One, Level::Zero) + ket_bra(Level::Two, Level::Zero);
    (up + up.adjoint()) * Complex64::new(lambda, 0.0)
}

impl MasterEquation {
    pub fn new(params: &EngineParams) -> Result<Self> {
        let occ = params.occupations()?;
        Ok(Self::with_occupations(params, occ))
    }

    pub fn with_occupations(params: &EngineParams, occ: BathOccupations) -> Self {
        let a_c = ket_bra(Level::G, Level::Zero);
        let a_1 = ket_bra(Level::G, Level::One);
        let a_2 = ket_bra(Level::G, Level::Two);
        let (n_c, n_h) = (occ.n_c, occ.n_h);
        let (g_c, g_h) = (params.gamma_c, params.gamma_h);
        let cross = g_h * params.p;

        let term = |rate, a: Operator, b: Operator| DissipatorTerm { rate, a, b };
        let mut terms = vec![
            (TermGroup::Cold, term(g_c * (n_c + 1.0), a_c, a_c)),
            (
                TermGroup::Cold,
                term(g_c * n_c, a_c.adjoint(), a_c.adjoint()),
            ),
        ];
        for a_k in [a_1, a_2] {
            terms.push((TermGroup::HotDiagonal, term(g_h * (n_h + 1.0), a_k, a_k)));
            terms.push((
                TermGroup::HotDiagonal,
                term(g_h * n_h, a_k.adjoint(), a_k.adjoint()),
            ));
        }
        for (a, b) in [(a_1, a_2), (a_2, a_1)] {
            terms.push((TermGroup::HotCross, term(cross * (n_h + 1.0), a, b)));
            terms.push((
                TermGroup::HotCross,
                term(cross * n_h, a.adjoint(), b.adjoint()),
            ));
        }

        MasterEquation {
            drive: drive_hamiltonian(params.lambda),
            terms,
        }
    }

    /// dρ/dt for an arbitrary operator ρ.
    pub fn apply(&self, rho: &Operator) -> Operator {
        let i = Complex64::new(0.0, 1.0);
        let mut out = -(self.drive * rho - rho * self.drive) * i;
        for (_, term) in &self.terms {
            out += term.apply(rho);
        }
        out
    }
}

/// Time derivatives of the seven independent matrix elements the
/// steady-state reduction works with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedDerivatives {
    pub rho_11: Complex64,
    pub rho_22: Complex64,
    pub rho_00: Complex64,
    pub rho_12: Complex64,
    pub rho_10: Complex64,
    pub rho_20: Complex64,
}

/// Hand-derived right-hand sides for ρ_11, ρ_22, ρ_00, ρ_12, ρ_10, ρ_20.
///
/// ρ_gg is read from `rho` as given; the reduced solver substitutes
/// 1 − ρ_11 − ρ_22 − ρ_00 before calling this.
pub fn tracked_rhs(
    params: &EngineParams,
    occ: BathOccupations,
    rho: &Operator,
) -> TrackedDerivatives {
    let e = |r: Level, c: Level| rho[(r.index(), c.index())];
    let (g, l0, l1, l2) = (Level::G, Level::Zero, Level::One, Level::Two);
    let i = Complex64::new(0.0, 1.0);
    let lam = params.lambda;
    let (n_c, n_h) = (occ.n_c, occ.n_h);
    let (g_c, g_h, p) = (params.gamma_c, params.gamma_h, params.p);

    let down_h = g_h * (n_h + 1.0);
    let down_c = g_c * (n_c + 1.0);
    let half_cross = 0.5 * p * down_h;

    let (r11, r22, r00, rgg) = (e(l1, l1), e(l2, l2), e(l0, l0), e(g, g));
    let (r12, r21) = (e(l1, l2), e(l2, l1));
    let (r10, r01) = (e(l1, l0), e(l0, l1));
    let (r20, r02) = (e(l2, l0), e(l0, l2));

    let rho_11 =
        i * lam * (r10 - r01) - (r11 * down_h - rgg * (g_h * n_h)) - (r12 + r21) * half_cross;
    let rho_22 =
        i * lam * (r20 - r02) - (r22 * down_h - rgg * (g_h * n_h)) - (r12 + r21) * half_cross;
    let rho_00 = i * lam * (r01 + r02 - r10 - r20) - (r00 * down_c - rgg * (g_c * n_c));
    let rho_12 = i * lam * (r10 - r02)
        - r12 * down_h
        - ((r11 + r22) * (n_h + 1.0) - rgg * (2.0 * n_h)) * (0.5 * p * g_h);
    let rho_10 = i * lam * (r11 - r00 + r12) - r10 * (0.5 * (down_c + down_h)) - r20 * half_cross;
    let rho_20 = i * lam * (r22 - r00 + r21) - r20 * (0.5 * (down_c + down_h)) - r10 * half_cross;

    TrackedDerivatives {
        rho_11,
        rho_22,
        rho_00,
        rho_12,
        rho_10,
        rho_20,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_operator(seed: u64) -> Operator {
        // small LCG; test-only
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        Operator::from_fn(|_, _| Complex64::new(next(), next()))
    }

    #[test]
    fn generator_is_trace_free_on_arbitrary_operators() {
        let params = EngineParams::power_curve_defaults(0.3, 0.7);
        let eq = MasterEquation::new(&params).unwrap();
        for seed in 0..10 {
            let out = eq.apply(&random_operator(seed));
            assert!(out.trace().norm() < 1e-14);
        }
    }

    #[test]
    fn hand_reduced_equations_match_operator_form() {
        // cross-check on non-Hermitian, non-normalized input: the reduction
        // must hold as a linear identity
        for (k, p) in [-1.0, -0.3, 0.0, 0.5, 1.0].into_iter().enumerate() {
            let params = EngineParams {
                gamma_c: 0.7,
                ..EngineParams::power_curve_defaults(0.4, p)
            };
            let occ = params.occupations().unwrap();
            let eq = MasterEquation::with_occupations(&params, occ);
            let rho = random_operator(100 + k as u64);
            let full = eq.apply(&rho);
            let hand = tracked_rhs(&params, occ, &rho);
            let at = |r: Level, c: Level| full[(r.index(), c.index())];
            let pairs = [
                (hand.rho_11, at(Level::One, Level::One)),
                (hand.rho_22, at(Level::Two, Level::Two)),
                (hand.rho_00, at(Level::Zero, Level::Zero)),
                (hand.rho_12, at(Level::One, Level::Two)),
                (hand.rho_10, at(Level::One, Level::Zero)),
                (hand.rho_20, at(Level::Two, Level::Zero)),
            ];
            for (h, f) in pairs {
                assert!((h - f).norm() < 1e-12, "p={p}: {h} vs {f}");
            }
        }
    }
}
