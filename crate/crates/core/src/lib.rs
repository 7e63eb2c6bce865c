//! Heat transport and photon statistics of a qubit-resonator system with a
//! composite (transverse plus longitudinal) coupling, each part attached to
//! its own thermal bath.
//!
//! The model is
//!
//! ```text
//! H = ε/2 σz + ω0 a†a + λ (cos θ σx + sin θ σz)(a† + a)
//! ```
//!
//! diagonalized in a truncated Fock space. Bath-induced transitions between
//! exact eigenstates give a classical rate equation whose steady state yields
//! the heat current and g²(0).
//!
//! ```
//! use qrtherm::{evaluate, ModelParams, PointSpec};
//!
//! let params = ModelParams::new(1.5, 0.5, 0.0, 20)?;
//! let point = PointSpec::new(params, 1e-3, 10.0, 1.5, 0.5)?;
//! let out = evaluate(&point)?;
//! assert!(out.current_q.scaled() > 0.0);
//! # Ok::<(), qrtherm::Error>(())
//! ```

pub mod error;
pub mod fock;
pub mod master;
pub mod observables;
pub mod oracles;
pub mod point;
pub mod spectrum;
pub mod sweep;

pub use error::{Error, Result};
pub use master::{BathLabel, BathSpec, RateMatrix, SteadyState, TransitionRateTable};
pub use observables::{CurrentBreakdown, G2Approx, G2Result};
pub use point::{evaluate, PointOutcome, PointSpec};
pub use spectrum::{EigenSystem, ModelParams};
