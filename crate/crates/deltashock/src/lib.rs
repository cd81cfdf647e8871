//! A numerical laboratory for singular (delta) shocks in an
//! incompressible two-phase flow model.
//!
//! The conservation-law system `beta_t + (v B1)_x = 0`,
//! `v_t + (v^2 B2)_x = 0` changes type on most of its physical strip, and
//! Riemann data in its over-compressive region produce shocks whose jump
//! conditions cannot be satisfied: the excess mass accumulates in a
//! growing delta measure on the shock line. This crate builds that
//! picture end to end, numerically:
//!
//! - [`model`]: exact model functions, flux, Jacobian, eigenstructure;
//! - [`riemann`]: Rankine-Hugoniot construction, the deficit `e0`, the
//!   over-compression test and region geometry;
//! - [`ode`]: adaptive Runge-Kutta 5(4) with event location, plus the
//!   slow-fast vector fields in both the direct and the compactified
//!   `(r, kappa) = (1/v, eps log v)` charts;
//! - [`singular`]: the zero-viscosity skeleton of the profile (two
//!   heteroclinic connections, two slow ramps, one crossing trajectory)
//!   and the phase-plane diagnostics that decide whether it exists;
//! - [`profile`]: exact-`eps` self-similar viscous profiles by
//!   two-parameter shooting with chart switching across the spike;
//! - [`weak_limit`]: delta strength, outer convergence, and
//!   test-function pairings of computed profiles;
//! - [`fv`]: a Lax-Friedrichs solver reproducing the unbounded growth on
//!   the original conservation law as an independent cross-check;
//! - [`cli`]: configuration parsing and the report-writing front end
//!   behind the `deltashock` binary.
//!
//! Every capability is also demonstrated by a runnable example under
//! `examples/`.

pub mod cli;
pub mod error;
pub mod fv;
pub mod model;
pub mod ode;
pub mod optim;
pub mod profile;
pub mod riemann;
pub mod singular;
pub mod weak_limit;

pub use error::{Error, Result};
pub use model::{ModelParams, State};
pub use riemann::{RiemannData, ShockQuantities};

/// The bundled demonstration case: densities `(2, 1)`, left state
/// `(1.9, 1.0)`, right state `(1.1, 1.1/1.9)`. The right momentum is
/// chosen so the shock is stationary; with these double-precision inputs
/// the computed speed is exactly zero.
pub fn sample_case() -> (ModelParams, RiemannData) {
    let p = ModelParams::new(2.0, 1.0).expect("valid densities");
    let rd = RiemannData::new(State::new(1.9, 1.0), State::new(1.1, 1.1 / 1.9));
    (p, rd)
}
