//! Numerical toolkit for the zero-mass scalar field equation
//!
//! ```text
//! -Δu + V(x) u = f(u),   u ∈ D^{1,2}(ℝ^N),  N ≥ 3,
//! ```
//!
//! with the double-power nonlinearity `f(s) = s^{q-1} / (1 + s^{q-p})`,
//! `2 < p < 2* < q`. The crate computes the radial ground state `ω` of the
//! limit problem `-Δu = f(u)` by shooting, evaluates the energy functionals
//! on two-bump superpositions `T (λ ω(·-R y₀) + (1-λ) ω(·-R y))`, and
//! measures the interaction asymptotics those superpositions obey.
//!
//! The crate is `no_std` and only needs `alloc`. All transcendental functions
//! go through [`libm`], so results are bit-identical across platforms.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod math;
pub mod nonlinearity;
pub mod ode;
pub mod potential;
pub mod quadrature;
pub mod radial_ode;
pub mod roots;

pub use error::{Error, Result};
pub use nonlinearity::{GrowthAudit, NonlinearitySpec};
pub use potential::{PotentialFamily, PotentialSpec};
pub use quadrature::{Estimate, QuadratureConfig, QuadratureMethod};
pub use radial_ode::{RadialProfile, ShotClass, ShotKind};

/// Library version, echoed into run artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
