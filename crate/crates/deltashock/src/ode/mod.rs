//! Adaptive explicit Runge-Kutta 5(4) integration with event location.
//!
//! Embedded Dormand-Prince pair with PI step-size control and FSAL. Events
//! are scalar functions of `(t, y)` located by sign change across an
//! accepted step followed by bisection on restarted sub-steps; no dense
//! output polynomial is used. A blow-up guard terminates integration with
//! a distinct reason once `|y|` exceeds [`BLOWUP_BOUND`] -- several of the
//! model's fields genuinely blow up and callers need to see that rather
//! than a crash.

pub mod fields;

pub use fields::{Field, VectorField, MAX_DIM};

use crate::error::{Error, Result};

/// State norm bound past which integration stops with
/// [`Termination::BlowUp`].
pub const BLOWUP_BOUND: f64 = 1e12;

/// Tolerances and caps for one integration.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Event values are refined until `|g| <= event_tol * (1 + |y|)`.
    pub event_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
            event_tol: 1e-12,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tols(rel_tol: f64, abs_tol: f64) -> Self {
        IntegratorConfig {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }
}

/// Which sign changes of an event function count as crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Any,
    /// Negative to positive only.
    Up,
    /// Positive to negative only.
    Down,
}

/// A scalar event function; a sign change of `f` across an accepted step
/// triggers localization. Terminal events stop the integration. A sample
/// sitting exactly on the zero set leaves the event unarmed until the
/// function moves off it, so integrations may start on a section without
/// firing spuriously.
/// Boxed scalar event function of `(t, y)`.
pub type EventFn<'a> = Box<dyn Fn(f64, &[f64]) -> f64 + 'a>;

pub struct Event<'a> {
    pub id: usize,
    pub terminal: bool,
    pub direction: Crossing,
    pub f: EventFn<'a>,
}

impl<'a> Event<'a> {
    pub fn new(id: usize, terminal: bool, f: impl Fn(f64, &[f64]) -> f64 + 'a) -> Self {
        Event {
            id,
            terminal,
            direction: Crossing::Any,
            f: Box::new(f),
        }
    }

    /// Fires only on negative-to-positive crossings.
    pub fn up(id: usize, terminal: bool, f: impl Fn(f64, &[f64]) -> f64 + 'a) -> Self {
        Event {
            direction: Crossing::Up,
            ..Event::new(id, terminal, f)
        }
    }
}

/// A located event occurrence.
#[derive(Debug, Clone)]
pub struct EventHit {
    pub id: usize,
    pub t: f64,
    pub y: Vec<f64>,
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    TimeEnd,
    Event(usize),
    StepCap,
    BlowUp,
}

/// Accepted samples, located events, and the stop reason.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub events: Vec<EventHit>,
    pub termination: Termination,
    pub accepted_steps: usize,
    pub rhs_evals: usize,
}

impl Trajectory {
    pub fn last_t(&self) -> f64 {
        *self.t.last().expect("trajectory has at least the initial sample")
    }

    pub fn last_y(&self) -> &[f64] {
        self.y.last().expect("trajectory has at least the initial sample")
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th and embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const PI_BETA: f64 = 0.04;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

#[inline]
fn inf_norm(y: &[f64]) -> f64 {
    y.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// One fixed Dormand-Prince step of size `h` from `(t, y)`; the returned
/// state is the 5th-order solution. With `k1_ready` the first stage is
/// reused from the previous step (FSAL); on return `k[6] = f(t+h, y5)`.
fn dp_step(
    field: &dyn Field,
    t: f64,
    y: &[f64],
    h: f64,
    k: &mut [[f64; MAX_DIM]; 7],
    k1_ready: bool,
    evals: &mut usize,
) -> [f64; MAX_DIM] {
    let dim = field.dim();
    let mut work = [0.0f64; MAX_DIM];
    if !k1_ready {
        field.eval(t, y, &mut k[0][..dim]);
        *evals += 1;
    }
    for stage in 1..6 {
        for i in 0..dim {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    acc += a * kj[i];
                }
            }
            work[i] = y[i] + h * acc;
        }
        let (_, tail) = k.split_at_mut(stage);
        field.eval(t + C[stage] * h, &work[..dim], &mut tail[0][..dim]);
        *evals += 1;
    }
    // The row A[6] gives the 5th-order result directly.
    let mut y5 = [0.0f64; MAX_DIM];
    for i in 0..dim {
        let mut acc = 0.0;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[6][j];
            if a != 0.0 {
                acc += a * kj[i];
            }
        }
        y5[i] = y[i] + h * acc;
    }
    // k7 = f(t + h, y5), reusable as the next step's k1.
    let (_, tail) = k.split_at_mut(6);
    field.eval(t + h, &y5[..dim], &mut tail[0][..dim]);
    *evals += 1;
    y5
}

/// Integrates `field` from `y0` over `t_span` (forward or backward).
///
/// Local error per step is kept at or below
/// `rel_tol * |y| + abs_tol` componentwise (RMS-scaled). Terminates at the
/// span end, the first terminal event, a blow-up, or the step cap; a
/// step-size underflow is reported as an error.
pub fn integrate(
    field: &dyn Field,
    y0: &[f64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
    events: &[Event],
) -> Result<Trajectory> {
    let dim = field.dim();
    if y0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: y0.len(),
        });
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionMismatch {
            expected: MAX_DIM,
            got: dim,
        });
    }
    let (t0, t_end) = t_span;
    if !(t_end - t0).is_finite() || t_end == t0 {
        return Err(Error::InvalidInput(format!(
            "degenerate integration span ({t0}, {t_end})"
        )));
    }
    let direction = (t_end - t0).signum();

    let mut t = t0;
    let mut y = [0.0f64; MAX_DIM];
    y[..dim].copy_from_slice(y0);

    let mut traj = Trajectory {
        t: vec![t0],
        y: vec![y0.to_vec()],
        events: Vec::new(),
        termination: Termination::TimeEnd,
        accepted_steps: 0,
        rhs_evals: 0,
    };

    let mut k = [[0.0f64; MAX_DIM]; 7];
    let mut evals = 0usize;
    field.eval(t, &y[..dim], &mut k[0][..dim]);
    evals += 1;

    // Event values at the current point.
    let mut g_prev: Vec<f64> = events.iter().map(|e| (e.f)(t, &y[..dim])).collect();

    // Initial step: conservative heuristic, the controller adapts quickly.
    let span = (t_end - t0).abs();
    let f_scale = inf_norm(&k[0][..dim]).max(1e-8);
    let mut h = direction
        * (0.01 * (inf_norm(&y[..dim]) + 1.0) / f_scale)
            .min(span / 10.0)
            .min(cfg.max_step);
    let mut fac_old: f64 = 1e-4;
    let mut k1_ready = true;

    loop {
        if traj.accepted_steps >= cfg.max_steps {
            traj.termination = Termination::StepCap;
            return Ok(traj);
        }
        if h.abs() < 1e3 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        let mut last = false;
        if (t + h - t_end) * direction >= 0.0 {
            h = t_end - t;
            last = true;
        }

        let y_new = dp_step(field, t, &y[..dim], h, &mut k, k1_ready, &mut evals);

        // Scaled RMS error from the embedded difference.
        let mut err = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += E[j] * kj[i];
                }
            }
            e *= h;
            let scale = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            let q = e / scale;
            err += q * q;
        }
        err = (err / dim as f64).sqrt();

        if err <= 1.0 {
            let t_new = t + h;
            traj.accepted_steps += 1;

            // Blow-up guard before anything else.
            if inf_norm(&y_new[..dim]) > BLOWUP_BOUND {
                traj.t.push(t_new);
                traj.y.push(y_new[..dim].to_vec());
                traj.termination = Termination::BlowUp;
                traj.rhs_evals = evals;
                return Ok(traj);
            }

            // Event scan across the accepted step.
            let mut triggered: Option<(usize, f64, Vec<f64>)> = None;
            for (idx, ev) in events.iter().enumerate() {
                let g_new = (ev.f)(t_new, &y_new[..dim]);
                let old = g_prev[idx];
                let crossed = old != 0.0 && g_new != 0.0 && old.signum() != g_new.signum();
                let landed = old != 0.0 && g_new == 0.0;
                let wanted = match ev.direction {
                    Crossing::Any => true,
                    Crossing::Up => old < 0.0,
                    Crossing::Down => old > 0.0,
                };
                if (crossed || landed) && wanted {
                    let (te, ye) = locate_event(
                        field,
                        &*ev.f,
                        t,
                        &y[..dim],
                        (t_new, &y_new[..dim]),
                        g_new,
                        cfg,
                        &mut evals,
                    );
                    if ev.terminal {
                        let earlier = triggered
                            .as_ref()
                            .is_none_or(|(_, tb, _)| (te - tb) * direction < 0.0);
                        if earlier {
                            triggered = Some((idx, te, ye.clone()));
                        }
                    }
                    traj.events.push(EventHit {
                        id: ev.id,
                        t: te,
                        y: ye,
                    });
                }
                g_prev[idx] = g_new;
            }
            if let Some((idx, te, ye)) = triggered {
                // Drop any recorded hits past the terminal time, then stop.
                traj.events
                    .retain(|hit| (hit.t - te) * direction <= 1e-14 * te.abs().max(1.0));
                traj.t.push(te);
                traj.y.push(ye);
                traj.termination = Termination::Event(events[idx].id);
                traj.rhs_evals = evals;
                return Ok(traj);
            }

            t = t_new;
            y = y_new;
            traj.t.push(t);
            traj.y.push(y[..dim].to_vec());
            k[0] = k[6]; // FSAL
            k1_ready = true;

            if last {
                traj.termination = Termination::TimeEnd;
                traj.rhs_evals = evals;
                return Ok(traj);
            }

            // PI controller (accepted branch).
            let err_floor = err.max(1e-10);
            let fac = err_floor.powf(-(0.2 - PI_BETA * 0.75)) * fac_old.powf(PI_BETA);
            let fac = (SAFETY * fac).clamp(MIN_FACTOR, MAX_FACTOR);
            h = direction * (h.abs() * fac).min(cfg.max_step);
            fac_old = err_floor;
        } else {
            // Rejected: shrink and retry. k1 is still valid.
            let fac = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            h *= fac;
            k1_ready = true;
        }
    }
}

/// Refinement of an event inside an accepted step by regula falsi with a
/// bisection fallback, re-stepping from the step's start each probe.
/// Stops once the event value satisfies the relative tolerance.
#[allow(clippy::too_many_arguments)]
fn locate_event(
    field: &dyn Field,
    g: &dyn Fn(f64, &[f64]) -> f64,
    t_lo: f64,
    y_lo: &[f64],
    hi_point: (f64, &[f64]),
    g_hi: f64,
    cfg: &IntegratorConfig,
    evals: &mut usize,
) -> (f64, Vec<f64>) {
    let dim = field.dim();
    let mut lo = t_lo;
    let mut hi = hi_point.0;
    let mut g_lo = g(t_lo, y_lo);
    let mut g_hi = g_hi;
    let mut best_t = hi_point.0;
    let mut best_y = hi_point.1.to_vec();
    let mut k = [[0.0f64; MAX_DIM]; 7];

    for _ in 0..200 {
        let mut mid = if g_hi != g_lo {
            (lo * g_hi - hi * g_lo) / (g_hi - g_lo)
        } else {
            0.5 * (lo + hi)
        };
        // Keep the probe strictly inside the bracket.
        let frac = (mid - lo) / (hi - lo);
        if !mid.is_finite() || !(0.05..=0.95).contains(&frac) {
            mid = 0.5 * (lo + hi);
        }
        if mid == lo || mid == hi {
            break;
        }
        let y_mid = dp_step(field, t_lo, y_lo, mid - t_lo, &mut k, false, evals);
        let g_mid = g(mid, &y_mid[..dim]);
        best_t = mid;
        best_y.clear();
        best_y.extend_from_slice(&y_mid[..dim]);
        if g_mid.abs() <= cfg.event_tol * (1.0 + inf_norm(&y_mid[..dim])) {
            return (mid, best_y);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    (best_t, best_y)
}

/// Fixed-step Dormand-Prince integration (5th-order weights, no error
/// control); used for convergence measurement.
pub fn integrate_fixed(
    field: &dyn Field,
    y0: &[f64],
    t_span: (f64, f64),
    n_steps: usize,
) -> Result<Vec<f64>> {
    let dim = field.dim();
    if y0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: y0.len(),
        });
    }
    let h = (t_span.1 - t_span.0) / n_steps as f64;
    let mut y = [0.0f64; MAX_DIM];
    y[..dim].copy_from_slice(y0);
    let mut t = t_span.0;
    let mut k = [[0.0f64; MAX_DIM]; 7];
    let mut evals = 0;
    for _ in 0..n_steps {
        y = dp_step(field, t, &y[..dim], h, &mut k, false, &mut evals);
        t += h;
    }
    Ok(y[..dim].to_vec())
}

/// Measured convergence order of the fixed-step method on a problem with
/// known solution `exact_end` at the end of `t_span`: the base grid is
/// halved once and the error ratio converted to an order.
pub fn convergence_order(
    field: &dyn Field,
    y0: &[f64],
    t_span: (f64, f64),
    exact_end: &[f64],
    base_steps: usize,
) -> Result<f64> {
    let err = |n: usize| -> Result<f64> {
        let y = integrate_fixed(field, y0, t_span, n)?;
        Ok(y.iter()
            .zip(exact_end)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    };
    let e1 = err(base_steps)?;
    let e2 = err(base_steps * 2)?;
    Ok((e1 / e2).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    
    use crate::riemann::shock_quantities;
    use crate::sample_case;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn harmonic_oscillator_full_period() {
        let traj = integrate(
            &VectorField::TestHarmonic,
            &[1.0, 0.0],
            (0.0, 2.0 * std::f64::consts::PI),
            &cfg(),
            &[],
        )
        .unwrap();
        let y = traj.last_y();
        assert!((y[0] - 1.0).abs() < 1e-8, "y0 = {}", y[0]);
        assert!(y[1].abs() < 1e-8, "y1 = {}", y[1]);
        assert_eq!(traj.termination, Termination::TimeEnd);
    }

    #[test]
    fn measured_order_is_fifth() {
        let order = convergence_order(
            &VectorField::TestDecay,
            &[1.0],
            (0.0, 1.0),
            &[(-1.0f64).exp()],
            20,
        )
        .unwrap();
        assert!((4.5..=5.5).contains(&order), "decay order {order}");
        let order = convergence_order(
            &VectorField::TestHarmonic,
            &[1.0, 0.0],
            (0.0, 1.0),
            &[1.0f64.cos(), -(1.0f64.sin())],
            20,
        )
        .unwrap();
        assert!((4.5..=5.5).contains(&order), "rotation order {order}");
    }

    #[test]
    fn tolerance_self_consistency_on_slow_fast_run() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        // A leg on the attracting side of the right end-state line, so the
        // comparison measures integrator error rather than the exponential
        // conditioning of a repelling stretch.
        let y0 = [
            rd.right.beta + 0.05,
            rd.right.v - 0.05,
            sq.w_right[0],
            sq.w_right[1],
            0.1,
        ];
        let field = VectorField::SlowFast {
            model: p,
            eps: 0.1,
        };
        let loose = integrate(&field, &y0, (0.0, 2.0), &IntegratorConfig::with_tols(1e-6, 1e-8), &[]).unwrap();
        let tight = integrate(&field, &y0, (0.0, 2.0), &IntegratorConfig::with_tols(1e-10, 1e-12), &[]).unwrap();
        let d: f64 = loose
            .last_y()
            .iter()
            .zip(tight.last_y())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(d < 1e-5, "endpoint difference {d}");
    }

    #[test]
    fn time_reversal_round_trip() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        let field = VectorField::FrozenFastCompact {
            model: p,
            w: sq.w_left,
            xi: sq.s,
        };
        let y0 = [1.5, 0.5];
        let c = cfg();
        let fwd = integrate(&field, &y0, (0.0, 1.0), &c, &[]).unwrap();
        let back = integrate(&field, fwd.last_y(), (1.0, 0.0), &c, &[]).unwrap();
        let tol = 10.0 * (c.rel_tol * inf_norm(&y0) + c.abs_tol);
        for (a, b) in back.last_y().iter().zip(&y0) {
            assert!((a - b).abs() <= tol, "round trip error {} > {tol}", (a - b).abs());
        }
    }

    #[test]
    fn r_plane_is_exactly_invariant() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        let field = VectorField::SlowFastCompact {
            model: p,
            eps: 0.05,
        };
        let y0 = [1.5, 0.0, sq.w_left[0], sq.w_left[1], sq.s, 0.02];
        let traj = integrate(&field, &y0, (0.0, 1.5), &cfg(), &[]).unwrap();
        for y in &traj.y {
            assert_eq!(y[1], 0.0, "r left the invariant plane");
        }
    }

    #[test]
    fn equilibrium_line_of_frozen_compact_field() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        let field = VectorField::FrozenFastCompact {
            model: p,
            w: sq.w_left,
            xi: sq.s,
        };
        let mut dy = [0.0f64; 2];
        field.eval(0.0, &[p.rho1, 0.0], &mut dy);
        assert_eq!(dy, [0.0, 0.0]);
    }

    #[test]
    fn event_crossing_located_to_tolerance() {
        let c = cfg();
        let events = [Event::new(7, true, |_t: f64, y: &[f64]| y[0])];
        // cos(t) crosses zero at pi/2.
        let traj = integrate(&VectorField::TestHarmonic, &[1.0, 0.0], (0.0, 3.0), &c, &events).unwrap();
        assert_eq!(traj.termination, Termination::Event(7));
        let hit = &traj.events[0];
        assert!((hit.t - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!(hit.y[0].abs() <= c.event_tol * (1.0 + inf_norm(&hit.y)));
    }

    #[test]
    fn monotone_segment_crosses_section_once() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        // On {r = 0} the compact field reduces to beta' = B1(beta) < 0.
        let field = VectorField::FrozenFastCompact {
            model: p,
            w: sq.w_left,
            xi: sq.s,
        };
        let mid = 0.5 * (p.rho1 + p.rho2);
        let events = [Event::new(0, false, move |_t: f64, y: &[f64]| y[0] - mid)];
        let traj = integrate(&field, &[p.rho1 - 1e-3, 0.0], (0.0, 60.0), &cfg(), &events).unwrap();
        assert_eq!(traj.events.len(), 1);
        let last = traj.last_y();
        assert!(last[0] > p.rho2 && last[0] < mid);
    }

    #[test]
    fn blow_up_is_a_distinct_termination() {
        // y' = -y integrated backward grows like e^{-t}; let it run.
        let traj = integrate(&VectorField::TestDecay, &[1.0], (0.0, -40.0), &cfg(), &[]).unwrap();
        assert_eq!(traj.termination, Termination::BlowUp);
        assert!(inf_norm(traj.last_y()) > BLOWUP_BOUND);
    }

    #[test]
    fn step_cap_is_a_distinct_termination() {
        let c = IntegratorConfig {
            max_steps: 5,
            ..cfg()
        };
        let traj = integrate(&VectorField::TestHarmonic, &[1.0, 0.0], (0.0, 100.0), &c, &[]).unwrap();
        assert_eq!(traj.termination, Termination::StepCap);
        assert_eq!(traj.accepted_steps, 5);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let r = integrate(&VectorField::TestHarmonic, &[1.0], (0.0, 1.0), &cfg(), &[]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sample_times_strictly_monotone_both_directions() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        let field = VectorField::FrozenFast {
            model: p,
            w: sq.w_left,
            xi: sq.s,
        };
        for span in [(0.0, 3.0), (0.0, -3.0)] {
            let traj = integrate(&field, &[1.5, 0.8], span, &cfg(), &[]).unwrap();
            let dir = (span.1 - span.0).signum();
            for w in traj.t.windows(2) {
                assert!((w[1] - w[0]) * dir > 0.0);
            }
        }
    }

    // Independent check of the backward heteroclinic landing: a plain RK4
    // stepper written here, far from the production integrator.
    fn rk4_endpoint(field: &dyn Field, y0: &[f64], t_end: f64, n: usize) -> Vec<f64> {
        let dim = field.dim();
        let mut y = y0.to_vec();
        let h = t_end / n as f64;
        let mut k1 = vec![0.0; dim];
        let mut k2 = vec![0.0; dim];
        let mut k3 = vec![0.0; dim];
        let mut k4 = vec![0.0; dim];
        let mut tmp = vec![0.0; dim];
        let mut t = 0.0;
        for _ in 0..n {
            field.eval(t, &y, &mut k1);
            for i in 0..dim {
                tmp[i] = y[i] + 0.5 * h * k1[i];
            }
            field.eval(t + 0.5 * h, &tmp, &mut k2);
            for i in 0..dim {
                tmp[i] = y[i] + 0.5 * h * k2[i];
            }
            field.eval(t + 0.5 * h, &tmp, &mut k3);
            for i in 0..dim {
                tmp[i] = y[i] + h * k3[i];
            }
            field.eval(t + h, &tmp, &mut k4);
            for i in 0..dim {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t += h;
        }
        y
    }

    #[test]
    fn backward_separatrix_lands_on_left_state() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        let field = VectorField::FrozenFastCompact {
            model: p,
            w: sq.w_left,
            xi: sq.s,
        };
        // Seed along the stable eigendirection of the saddle at (rho1, 0),
        // oriented into {beta < rho1, r > 0}.
        let c = (sq.s * p.rho1 + sq.w_left[0]) / (p.b1_prime_raw(p.rho1) + p.b2_raw(p.rho1));
        let norm = (c * c + 1.0).sqrt();
        let delta = 1e-7;
        let y0 = [p.rho1 + delta * c / norm, delta / norm];
        let t_back = -120.0;
        let traj = integrate(&field, &y0, (0.0, t_back), &cfg(), &[]).unwrap();
        let end = traj.last_y();
        let target = [rd.left.beta, 1.0 / rd.left.v];
        let d = ((end[0] - target[0]).powi(2) + (end[1] - target[1]).powi(2)).sqrt();
        assert!(d < 1e-6, "distance to left state {d}");

        // Oracle: fine fixed-step RK4 over the same span.
        let oracle = rk4_endpoint(&field, &y0, t_back, 12_000_000);
        let d01 = end[0] - oracle[0];
        let d11 = end[1] - oracle[1];
        assert!(
            (d01 * d01 + d11 * d11).sqrt() < 1e-6,
            "adaptive vs rk4 oracle: {} {}",
            d01,
            d11
        );
    }
}
