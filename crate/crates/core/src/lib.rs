// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulation and optimization of a degenerate four-level laser heat engine
//! whose hot bath induces coherence between the two degenerate levels.
//!
//! The crate is organized bottom-up:
//!
//! * [`params`]: physical parameters, bath occupations, validation;
//! * [`liouvillian`]: master equation and two independent steady-state solvers;
//! * [`observables`]: power, heat flux, efficiency;
//! * [`closed_forms`]: analytic fluxes, powers and efficiencies;
//! * [`optimize`]: golden-section and simplex maximization, engine schemes;
//! * [`universality`]: flux derivatives, symmetry tests, efficiency series;
//! * [`cli`]: the `nic-engine` command line.
//!
//! ```
//! use nic_engine::{observables, liouvillian, EngineParams};
//!
//! let params = EngineParams::power_curve_defaults(0.2, 0.5);
//! let state = liouvillian::solve_steady_full(&params)?.state;
//! let numeric = observables::power_from_state(&params, &state)?;
//! let closed = observables::power_closed_form(&params)?;
//! assert!((numeric - closed).abs() < 1e-12);
//! # Ok::<(), nic_engine::Error>(())
//! ```

pub mod cli;
pub mod closed_forms;
mod error;
pub mod liouvillian;
pub mod observables;
pub mod optimize;
pub mod params;
pub mod universality;

pub use error::{Error, Result};
pub use params::{
    carnot, planck_occupation, validate, BathOccupations, DimensionlessPoint, EngineParams,
    ValidationMode, ValidationReport, Violation,
};

// The book's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/steady-state.md")]
    mod steady_state {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/coherence.md")]
    mod coherence {}
    #[doc = include_str!("../../../book/src/optimization.md")]
    mod optimization {}
    #[doc = include_str!("../../../book/src/universality.md")]
    mod universality {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
