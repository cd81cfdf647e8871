//! Model functions, flux, Jacobian, and eigenstructure of the two-phase
//! flow system
//!
//! ```text
//!   beta_t + (v B1(beta))_x   = 0
//!   v_t    + (v^2 B2(beta))_x = 0
//! ```
//!
//! with
//!
//! ```text
//!   B1(beta) = (beta - rho1)(beta - rho2) / beta,
//!   B2(beta) = (beta^2 - rho1 rho2) / (2 beta^2),
//! ```
//!
//! where `beta` is a density-weighted volume element confined to the
//! physical strip `rho2 <= beta <= rho1` and `v` is the momentum
//! difference. The characteristic speeds form a complex-conjugate pair on
//! most of the strip, so the system changes type there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for deciding membership on the hyperbolicity lines
/// `beta = rho1`, `beta = rho2`, `v = 0`. Purely diagnostic.
pub const HYPERBOLIC_TOL: f64 = 1e-12;

/// The two densities defining the model. Requires `0 < rho2 < rho1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub rho1: f64,
    pub rho2: f64,
}

/// A state `(beta, v)` of the system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub beta: f64,
    pub v: f64,
}

impl State {
    pub fn new(beta: f64, v: f64) -> Self {
        State { beta, v }
    }
}

/// Characteristic speeds `lambda_(+-) = 2 v B2(beta) +- v sqrt(B1 B2')`.
///
/// Inside the open strip with `v != 0` the radicand is negative and the
/// pair is complex conjugate; `real_part` is their common real part
/// `2 v B2(beta)`, the quantity entering the over-compression test.
#[derive(Debug, Clone, Copy)]
pub struct EigenPair {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub real_part: f64,
}

impl ModelParams {
    pub fn new(rho1: f64, rho2: f64) -> Result<Self> {
        if !(rho2 > 0.0 && rho1 > rho2) || !rho1.is_finite() {
            return Err(Error::InvalidParams { rho1, rho2 });
        }
        Ok(ModelParams { rho1, rho2 })
    }

    /// `sqrt(rho1 rho2)`, the root of B2 inside the strip.
    pub fn beta_sonic(&self) -> f64 {
        (self.rho1 * self.rho2).sqrt()
    }

    /// True if `beta` lies in the closed physical strip `[rho2, rho1]`.
    pub fn in_strip(&self, beta: f64) -> bool {
        self.rho2 <= beta && beta <= self.rho1
    }

    #[inline]
    pub(crate) fn b1_raw(&self, beta: f64) -> f64 {
        (beta - self.rho1) * (beta - self.rho2) / beta
    }

    #[inline]
    pub(crate) fn b2_raw(&self, beta: f64) -> f64 {
        (beta * beta - self.rho1 * self.rho2) / (2.0 * beta * beta)
    }

    #[inline]
    pub(crate) fn b1_prime_raw(&self, beta: f64) -> f64 {
        1.0 - self.rho1 * self.rho2 / (beta * beta)
    }

    #[inline]
    pub(crate) fn b2_prime_raw(&self, beta: f64) -> f64 {
        self.rho1 * self.rho2 / (beta * beta * beta)
    }

    /// `B1(beta) = (beta - rho1)(beta - rho2)/beta`.
    pub fn b1(&self, beta: f64) -> Result<f64> {
        self.check_pole(beta)?;
        Ok(self.b1_raw(beta))
    }

    /// `B2(beta) = (beta^2 - rho1 rho2)/(2 beta^2)`.
    pub fn b2(&self, beta: f64) -> Result<f64> {
        self.check_pole(beta)?;
        Ok(self.b2_raw(beta))
    }

    /// `B1'(beta) = 1 - rho1 rho2 / beta^2`. Identically `2 B2(beta)`.
    pub fn b1_prime(&self, beta: f64) -> Result<f64> {
        self.check_pole(beta)?;
        Ok(self.b1_prime_raw(beta))
    }

    /// `B2'(beta) = rho1 rho2 / beta^3`.
    pub fn b2_prime(&self, beta: f64) -> Result<f64> {
        self.check_pole(beta)?;
        Ok(self.b2_prime_raw(beta))
    }

    #[inline]
    pub(crate) fn flux_raw(&self, beta: f64, v: f64) -> [f64; 2] {
        [v * self.b1_raw(beta), v * v * self.b2_raw(beta)]
    }

    /// The flux `f(u) = (v B1(beta), v^2 B2(beta))`.
    pub fn flux(&self, u: State) -> Result<[f64; 2]> {
        self.check_pole(u.beta)?;
        Ok(self.flux_raw(u.beta, u.v))
    }

    /// The flux Jacobian
    /// `Df(u) = [[v B1'(beta), B1(beta)], [v^2 B2'(beta), 2 v B2(beta)]]`.
    pub fn jacobian(&self, u: State) -> Result<[[f64; 2]; 2]> {
        self.check_pole(u.beta)?;
        let State { beta, v } = u;
        Ok([
            [v * self.b1_prime_raw(beta), self.b1_raw(beta)],
            [v * v * self.b2_prime_raw(beta), 2.0 * v * self.b2_raw(beta)],
        ])
    }

    /// Characteristic speeds of `Df(u)`, complex where the radicand
    /// `B1 B2'` is negative.
    pub fn eigenvalues(&self, u: State) -> Result<EigenPair> {
        self.check_pole(u.beta)?;
        let State { beta, v } = u;
        let re = 2.0 * v * self.b2_raw(beta);
        let radicand = self.b1_raw(beta) * self.b2_prime_raw(beta);
        let (plus, minus) = if radicand >= 0.0 {
            let root = v * radicand.sqrt();
            (
                Complex64::new(re + root, 0.0),
                Complex64::new(re - root, 0.0),
            )
        } else {
            let root = v * (-radicand).sqrt();
            (Complex64::new(re, root), Complex64::new(re, -root))
        };
        Ok(EigenPair {
            lambda_plus: plus,
            lambda_minus: minus,
            real_part: re,
        })
    }

    /// The common real part `2 v B2(beta)` of the characteristic speeds.
    #[inline]
    pub(crate) fn char_real_part(&self, u: State) -> f64 {
        2.0 * u.v * self.b2_raw(u.beta)
    }

    /// True iff the system is hyperbolic at `u`, i.e. `u` lies on one of
    /// the lines `beta = rho1`, `beta = rho2`, `v = 0` (within
    /// [`HYPERBOLIC_TOL`]).
    pub fn is_hyperbolic(&self, u: State) -> bool {
        (u.beta - self.rho1).abs() <= HYPERBOLIC_TOL
            || (u.beta - self.rho2).abs() <= HYPERBOLIC_TOL
            || u.v.abs() <= HYPERBOLIC_TOL
    }

    #[inline]
    fn check_pole(&self, beta: f64) -> Result<()> {
        if beta == 0.0 {
            Err(Error::BetaPole)
        } else {
            Ok(())
        }
    }
}
