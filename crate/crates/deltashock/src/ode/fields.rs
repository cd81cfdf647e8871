//! The vector fields integrated throughout the crate.
//!
//! The self-similar profile equation
//!
//! ```text
//!   eps u_xi = f(u) - xi u - w,    w_xi = -u
//! ```
//!
//! becomes, after rescaling to the fast time `t` defined by `xi_dot = eps`,
//! the five-dimensional slow-fast system in `(beta, v, w1, w2, xi)`:
//!
//! ```text
//!   beta_dot = v B1(beta)   - xi beta - w1
//!   v_dot    = v^2 B2(beta) - xi v    - w2
//!   w1_dot   = -eps beta,  w2_dot = -eps v,  xi_dot = eps.
//! ```
//!
//! To follow the spike where `v` blows up like `exp(kappa0/eps)`, the
//! compactified chart `r = 1/v`, `kappa = eps log v` is used; multiplying
//! the field by `r` (a positive time rescaling) gives
//!
//! ```text
//!   beta_dot = B1(beta) - xi beta r - w1 r
//!   r_dot    = -r B2(beta) + xi r^2 + w2 r^3
//!   w1_dot   = -eps beta r,  w2_dot = -eps,  xi_dot = eps r,
//!   kappa_dot = eps (B2(beta) - xi r - w2 r^2).
//! ```
//!
//! The plane `{r = 0}` is exactly invariant, and on it the lines
//! `beta = rho1` and `beta = rho2` are equilibrium sets of the frozen
//! fast subsystem.

use crate::model::ModelParams;

/// Largest state dimension any field uses (the integrator's scratch size).
pub const MAX_DIM: usize = 8;

/// Right-hand side of an autonomous or non-autonomous ODE system.
pub trait Field {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// The named systems of the model, plus two closed-form test problems
/// used to validate the integrator itself.
#[derive(Debug, Clone, Copy)]
pub enum VectorField {
    /// 5-dim slow-fast system in `(beta, v, w1, w2, xi)`, fast time.
    SlowFast { model: ModelParams, eps: f64 },
    /// 2-dim frozen fast subsystem in `(beta, v)` at fixed `(w, xi)`.
    FrozenFast {
        model: ModelParams,
        w: [f64; 2],
        xi: f64,
    },
    /// 6-dim compactified system in `(beta, r, w1, w2, xi, kappa)`.
    SlowFastCompact { model: ModelParams, eps: f64 },
    /// 2-dim frozen compactified subsystem in `(beta, r)`.
    FrozenFastCompact {
        model: ModelParams,
        w: [f64; 2],
        xi: f64,
    },
    /// 4-dim profile equation in `(beta, v, w1, w2)` with `xi` as the
    /// independent variable.
    SelfSimilar { model: ModelParams, eps: f64 },
    /// `y' = -y`, exact solution `exp(-t)`.
    TestDecay,
    /// `y'' = -y` as a 2-dim rotation, period `2 pi`.
    TestHarmonic,
}

#[inline]
pub(crate) fn frozen_fast_rhs(m: &ModelParams, w: [f64; 2], xi: f64, y: &[f64], dy: &mut [f64]) {
    let (beta, v) = (y[0], y[1]);
    dy[0] = v * m.b1_raw(beta) - xi * beta - w[0];
    dy[1] = v * v * m.b2_raw(beta) - xi * v - w[1];
}

#[inline]
pub(crate) fn frozen_fast_compact_rhs(
    m: &ModelParams,
    w: [f64; 2],
    xi: f64,
    y: &[f64],
    dy: &mut [f64],
) {
    let (beta, r) = (y[0], y[1]);
    dy[0] = m.b1_raw(beta) - xi * beta * r - w[0] * r;
    dy[1] = -r * m.b2_raw(beta) + xi * r * r + w[1] * r * r * r;
}

#[inline]
pub(crate) fn slow_fast_rhs(m: &ModelParams, eps: f64, y: &[f64], dy: &mut [f64]) {
    frozen_fast_rhs(m, [y[2], y[3]], y[4], y, dy);
    dy[2] = -eps * y[0];
    dy[3] = -eps * y[1];
    dy[4] = eps;
}

#[inline]
pub(crate) fn slow_fast_compact_rhs(m: &ModelParams, eps: f64, y: &[f64], dy: &mut [f64]) {
    let (beta, r) = (y[0], y[1]);
    frozen_fast_compact_rhs(m, [y[2], y[3]], y[4], y, dy);
    dy[2] = -eps * beta * r;
    dy[3] = -eps;
    dy[4] = eps * r;
    dy[5] = eps * (m.b2_raw(beta) - y[4] * r - y[3] * r * r);
}

impl Field for VectorField {
    fn dim(&self) -> usize {
        match self {
            VectorField::SlowFast { .. } => 5,
            VectorField::FrozenFast { .. } => 2,
            VectorField::SlowFastCompact { .. } => 6,
            VectorField::FrozenFastCompact { .. } => 2,
            VectorField::SelfSimilar { .. } => 4,
            VectorField::TestDecay => 1,
            VectorField::TestHarmonic => 2,
        }
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        match self {
            VectorField::SlowFast { model, eps } => slow_fast_rhs(model, *eps, y, dy),
            VectorField::FrozenFast { model, w, xi } => frozen_fast_rhs(model, *w, *xi, y, dy),
            VectorField::SlowFastCompact { model, eps } => {
                slow_fast_compact_rhs(model, *eps, y, dy)
            }
            VectorField::FrozenFastCompact { model, w, xi } => {
                frozen_fast_compact_rhs(model, *w, *xi, y, dy)
            }
            VectorField::SelfSimilar { model, eps } => {
                // xi is the independent variable here.
                let xi = t;
                frozen_fast_rhs(model, [y[2], y[3]], xi, y, dy);
                dy[0] /= *eps;
                dy[1] /= *eps;
                dy[2] = -y[0];
                dy[3] = -y[1];
            }
            VectorField::TestDecay => dy[0] = -y[0],
            VectorField::TestHarmonic => {
                dy[0] = y[1];
                dy[1] = -y[0];
            }
        }
    }
}
