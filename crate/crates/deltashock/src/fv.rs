//! Lax-Friedrichs finite-volume solver for the conservation-law form.
//!
//! First-order scheme
//!
//! ```text
//!   u_j <- (u_{j-1} + u_{j+1})/2 - dt/(2 dx) (f(u_{j+1}) - f(u_{j-1}))
//! ```
//!
//! with zero-order extrapolation (outflow) ghost cells. The time step is
//! `dt = cfl dx / max(c_max, 1)` where `c_max` bounds the characteristic
//! modulus `|Re lambda| + |Im lambda|` over the cells; the complex
//! characteristics make the usual real-speed CFL rule ill-defined, so the
//! modulus bound is used instead.
//!
//! On over-compressive Riemann data the scheme has no bounded solution to
//! converge to: the cell maxima of `v` grow without bound while total
//! `beta` and `v` remain conserved up to the boundary fluxes, which is
//! exactly the delta-shock picture.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::riemann::{RiemannData, ShockQuantities};

/// Uniform 1-d grid of cell averages.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dx: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if x_max <= x_min || n_cells < 10 {
            return Err(Error::InvalidInput(format!(
                "grid needs x_max > x_min and at least 10 cells, got [{x_min}, {x_max}] / {n_cells}"
            )));
        }
        Ok(Grid1D {
            x_min,
            x_max,
            n_cells,
            dx: (x_max - x_min) / n_cells as f64,
        })
    }

    pub fn center(&self, j: usize) -> f64 {
        self.x_min + (j as f64 + 0.5) * self.dx
    }
}

/// Cell averages of `(beta, v)` at a time level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FvState {
    pub grid: Grid1D,
    pub u: Vec<[f64; 2]>,
    pub t: f64,
    pub step: usize,
}

/// Riemann initial data split at `x = 0`.
pub fn init_riemann(grid: Grid1D, rd: &RiemannData) -> FvState {
    let u = (0..grid.n_cells)
        .map(|j| {
            if grid.center(j) < 0.0 {
                [rd.left.beta, rd.left.v]
            } else {
                [rd.right.beta, rd.right.v]
            }
        })
        .collect();
    FvState {
        grid,
        u,
        t: 0.0,
        step: 0,
    }
}

fn char_modulus_bound(u: [f64; 2], p: &ModelParams) -> f64 {
    let re = 2.0 * u[1] * p.b2_raw(u[0]);
    let rad = p.b1_raw(u[0]) * p.b2_prime_raw(u[0]);
    re.abs() + u[1].abs() * rad.abs().sqrt()
}

/// One Lax-Friedrichs step. Errors out if any cell became non-finite.
pub fn lf_step(state: &FvState, p: &ModelParams, cfl: f64) -> Result<FvState> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidInput(format!("cfl = {cfl} outside (0, 1]")));
    }
    let n = state.grid.n_cells;
    let mut c_max = 1.0f64;
    for &u in &state.u {
        if !u[0].is_finite() || !u[1].is_finite() {
            return Err(Error::FvBlowUp { step: state.step });
        }
        c_max = c_max.max(char_modulus_bound(u, p));
    }
    let dt = cfl * state.grid.dx / c_max;
    let lam = dt / (2.0 * state.grid.dx);

    let cell = |j: isize| -> [f64; 2] {
        // Outflow: copy the edge cells.
        let idx = j.clamp(0, n as isize - 1) as usize;
        state.u[idx]
    };
    let mut next = Vec::with_capacity(n);
    for j in 0..n as isize {
        let um = cell(j - 1);
        let up = cell(j + 1);
        let fm = p.flux_raw(um[0], um[1]);
        let fp = p.flux_raw(up[0], up[1]);
        next.push([
            0.5 * (um[0] + up[0]) - lam * (fp[0] - fm[0]),
            0.5 * (um[1] + up[1]) - lam * (fp[1] - fm[1]),
        ]);
    }
    Ok(FvState {
        grid: state.grid,
        u: next,
        t: state.t + dt,
        step: state.step + 1,
    })
}

/// Time series recorded by [`run`]. Totals are boundary-corrected: the
/// accumulated boundary fluxes are added back so a conservative scheme
/// keeps them constant to rounding.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunSeries {
    pub step: Vec<usize>,
    pub t: Vec<f64>,
    pub max_v: Vec<f64>,
    pub min_beta: Vec<f64>,
    pub max_beta: Vec<f64>,
    pub total_beta: Vec<f64>,
    pub total_v: Vec<f64>,
    /// Centroid of `v` minus its background, relative to `x = s t`.
    pub centroid_offset: Vec<f64>,
}

/// Result of a multi-step run; `blow_up_step` is set if the run ended
/// early, with the recorded history intact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub series: RunSeries,
    pub final_state: FvState,
    pub blow_up_step: Option<usize>,
}

/// Runs `n_steps` Lax-Friedrichs steps from Riemann data, recording the
/// series every `record_every` steps (and always at the first and last).
pub fn run(
    rd: &RiemannData,
    p: &ModelParams,
    grid: Grid1D,
    cfl: f64,
    n_steps: usize,
    record_every: usize,
) -> Result<RunResult> {
    let sq = crate::riemann::shock_quantities(rd, p)?;
    let mut state = init_riemann(grid, rd);
    let mut series = RunSeries::default();
    let every = record_every.max(1);

    // Accumulated boundary-flux corrections for the conserved totals.
    let mut correction = [0.0f64; 2];
    record(&mut series, &state, &sq, rd, correction);

    let mut blow_up_step = None;
    for _ in 0..n_steps {
        let f_left = p.flux_raw(state.u[0][0], state.u[0][1]);
        let f_right = p.flux_raw(
            state.u[grid.n_cells - 1][0],
            state.u[grid.n_cells - 1][1],
        );
        let t_before = state.t;
        match lf_step(&state, p, cfl) {
            Ok(next) => {
                let dt = next.t - t_before;
                correction[0] += dt * (f_right[0] - f_left[0]);
                correction[1] += dt * (f_right[1] - f_left[1]);
                state = next;
            }
            Err(Error::FvBlowUp { step }) => {
                blow_up_step = Some(step);
                break;
            }
            Err(e) => return Err(e),
        }
        if state.step.is_multiple_of(every) || state.step == n_steps {
            record(&mut series, &state, &sq, rd, correction);
        }
    }
    Ok(RunResult {
        series,
        final_state: state,
        blow_up_step,
    })
}

fn record(
    series: &mut RunSeries,
    state: &FvState,
    sq: &ShockQuantities,
    rd: &RiemannData,
    correction: [f64; 2],
) {
    let dx = state.grid.dx;
    let mut max_v = f64::NEG_INFINITY;
    let mut min_beta = f64::INFINITY;
    let mut max_beta = f64::NEG_INFINITY;
    let mut tot = [0.0f64; 2];
    for &u in &state.u {
        max_v = max_v.max(u[1]);
        min_beta = min_beta.min(u[0]);
        max_beta = max_beta.max(u[0]);
        tot[0] += u[0] * dx;
        tot[1] += u[1] * dx;
    }
    series.step.push(state.step);
    series.t.push(state.t);
    series.max_v.push(max_v);
    series.min_beta.push(min_beta);
    series.max_beta.push(max_beta);
    series.total_beta.push(tot[0] + correction[0]);
    series.total_v.push(tot[1] + correction[1]);
    series.centroid_offset.push(centroid_offset(state, sq, rd));
}

/// Centroid of `v` minus its piecewise background, relative to the shock
/// position `x = s t`; `0` before any excess mass accumulates.
pub fn centroid_offset(state: &FvState, sq: &ShockQuantities, rd: &RiemannData) -> f64 {
    let shock_x = sq.s * state.t;
    let dx = state.grid.dx;
    let mut mass = 0.0;
    let mut moment = 0.0;
    for (j, &u) in state.u.iter().enumerate() {
        let x = state.grid.center(j);
        let bg = if x < shock_x { rd.left.v } else { rd.right.v };
        let m = (u[1] - bg) * dx;
        mass += m;
        moment += (x - shock_x) * m;
    }
    if mass.abs() < 1e-12 {
        0.0
    } else {
        moment / mass
    }
}

/// Estimated delta strength per unit time: `int (v - background) dx / t`
/// with the background split at `x = s t`. Approaches `e0` for a
/// first-order scheme as `t` grows. Returns `0` at `t = 0`.
pub fn delta_estimate(state: &FvState, sq: &ShockQuantities, rd: &RiemannData) -> f64 {
    if state.t == 0.0 {
        return 0.0;
    }
    let shock_x = sq.s * state.t;
    let dx = state.grid.dx;
    let mut mass = 0.0;
    for (j, &u) in state.u.iter().enumerate() {
        let x = state.grid.center(j);
        let bg = if x < shock_x { rd.left.v } else { rd.right.v };
        mass += (u[1] - bg) * dx;
    }
    mass / state.t
}
