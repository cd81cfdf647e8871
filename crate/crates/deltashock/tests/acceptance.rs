//! Acceptance suite: one test per numbered criterion, each printing a
//! pass/fail line (run with `--nocapture` to see them on success).
//!
//! Criteria 7 and 9 contain clauses that the measurements show cannot
//! hold at the pinned discretization parameters; those asserts are kept
//! faithful to the stated tolerances and fail with the measured numbers
//! in the panic message rather than being loosened. Details are printed
//! by the tests themselves.

use std::sync::OnceLock;
use std::time::Instant;

use deltashock::fv::{self, Grid1D};
use deltashock::model::State;
use deltashock::ode::{convergence_order, integrate, IntegratorConfig, VectorField};
use deltashock::profile::{self, ShootConfig, SweepReport};
use deltashock::riemann::{self, RiemannData};
use deltashock::singular::{self, SkeletonOptions, Side};
use deltashock::weak_limit;
use deltashock::sample_case;

const E0: f64 = 0.33240997229916897;
const KAPPA0: f64 = 0.055401662049861494;

fn pass(id: u32, name: &str, detail: String) {
    println!("criterion {id:02} {name}: PASS ({detail})");
}

fn shared_sweep() -> &'static SweepReport {
    static SWEEP: OnceLock<SweepReport> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let (p, rd) = sample_case();
        profile::sweep(&rd, &[0.1, 0.05, 0.02, 0.01], &ShootConfig::default(), &p)
            .expect("sweep runs")
    })
}

#[test]
fn criterion_01_sample_shock_quantities() {
    let (p, rd) = sample_case();
    let start = Instant::now();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(sq.s, 0.0, "shock speed must be exactly zero");
    assert!((sq.w_left[0] - (-0.05)).abs() < 0.005);
    assert!((sq.w_left[1] - 0.22).abs() < 0.005);
    assert!((sq.w_right[0] - (-0.05)).abs() < 0.005);
    assert!((sq.w_right[1] - (-0.11)).abs() < 0.005);
    assert!(
        elapsed.as_secs_f64() < 1e-3,
        "runtime {elapsed:?} exceeds 1 ms"
    );
    pass(
        1,
        "sample-shock-quantities",
        format!(
            "s = {}, w_L = ({:.6}, {:.6}), w_R = ({:.6}, {:.6}), e0 = {:.12}, {elapsed:?}",
            sq.s, sq.w_left[0], sq.w_left[1], sq.w_right[0], sq.w_right[1], sq.e0
        ),
    );
}

#[test]
fn criterion_02_hypothesis_verdicts() {
    let (p, rd) = sample_case();
    let start = Instant::now();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let h1 = riemann::check_h1(&rd, &p);
    let h2 = riemann::check_h2(&rd, &p);
    let h3s = riemann::check_h3_sufficient(&rd, &sq, &p, riemann::DEFAULT_S_MAX);
    let report = singular::check_h3(&sq, &rd, &p, &SkeletonOptions::default()).unwrap();
    let elapsed = start.elapsed();

    assert!(h1 && h2 && h3s, "H1 = {h1}, H2 = {h2}, structural H3 = {h3s}");
    assert!(report.gamma1.landed() && report.gamma1.endpoint_residual < 1e-6);
    assert!(report.gamma2.landed() && report.gamma2.endpoint_residual < 1e-6);
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?} exceeds 1 s");
    pass(
        2,
        "hypothesis-verdicts",
        format!(
            "H1/H2/H3-structural all true; connection residuals {:.2e}, {:.2e}; {elapsed:?}",
            report.gamma1.endpoint_residual, report.gamma2.endpoint_residual
        ),
    );
}

#[test]
fn criterion_03_region_equivalence_on_grid() {
    let (p, rd) = sample_case();
    let ul = rd.left;
    let start = Instant::now();

    // Dense polylines of both boundary curves for the exclusion distance.
    let n_curve = 20_000;
    let mut curve_pts: Vec<(f64, f64)> = Vec::with_capacity(2 * n_curve);
    for i in 0..n_curve {
        let beta = p.rho2 + (i as f64 + 0.5) / n_curve as f64 * (ul.beta - p.rho2);
        if let Some(v) = riemann::oc_curve_left_char(beta, ul, &p) {
            curve_pts.push((beta, v));
        }
        if let Some(v) = riemann::oc_curve_right_char(beta, ul, &p) {
            curve_pts.push((beta, v));
        }
    }

    let n = 50;
    let mut checked = 0;
    let mut excluded = 0;
    for i in 0..n {
        for j in 0..n {
            let beta = p.rho2 + (i as f64 + 0.5) / n as f64 * (ul.beta - p.rho2);
            let v = (j as f64 + 0.5) / n as f64 * 2.0 * ul.v;
            // Cheap vertical pre-filter, exact scan only near the curves.
            let vertical = [
                riemann::oc_curve_left_char(beta, ul, &p),
                riemann::oc_curve_right_char(beta, ul, &p),
            ]
            .iter()
            .filter_map(|c| c.map(|cv| (v - cv).abs()))
            .fold(f64::INFINITY, f64::min);
            let dist = if vertical < 1e-2 {
                curve_pts
                    .iter()
                    .map(|&(cb, cv)| ((beta - cb).powi(2) + (v - cv).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            } else {
                vertical
            };
            if dist <= 1e-6 {
                excluded += 1;
                continue;
            }
            let cand = RiemannData::new(ul, State::new(beta, v));
            assert_eq!(
                riemann::in_overcompressive_region(&cand, &p),
                riemann::check_h1(&cand, &p),
                "disagreement at ({beta}, {v}), curve distance {dist:.2e}"
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(checked + excluded, n * n);
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?} exceeds 1 s");
    pass(
        3,
        "region-equivalence",
        format!("{checked} grid points agree ({excluded} within the boundary dead zone); {elapsed:?}"),
    );
}

#[test]
fn criterion_04_saddle_data() {
    let (p, rd) = sample_case();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let sd = singular::saddle_at_p(Side::Left, &sq, &p);
    assert!((sd.lambda_u - 0.5).abs() < 1e-12);
    assert!((sd.lambda_s - (-0.25)).abs() < 1e-12);

    // Finite-difference cross-check of the analytic Jacobian.
    let field = VectorField::FrozenFastCompact {
        model: p,
        w: sq.w_left,
        xi: sq.s,
    };
    use deltashock::ode::Field;
    let jac = singular::frozen_compact_jacobian(sd.point, sq.w_left, sq.s, &p);
    let h = 1e-6;
    for col in 0..2 {
        let mut plus = sd.point;
        let mut minus = sd.point;
        plus[col] += h;
        minus[col] -= h;
        let mut fp = [0.0; 2];
        let mut fm = [0.0; 2];
        field.eval(0.0, &plus, &mut fp);
        field.eval(0.0, &minus, &mut fm);
        for row in 0..2 {
            let fd = (fp[row] - fm[row]) / (2.0 * h);
            assert!(
                (fd - jac[row][col]).abs() < 1e-6,
                "Jacobian entry ({row},{col}): {fd} vs {}",
                jac[row][col]
            );
        }
    }
    pass(
        4,
        "saddle-data",
        format!(
            "eigenvalues ({}, {}), finite differences agree to 1e-6",
            sd.lambda_u, sd.lambda_s
        ),
    );
}

#[test]
fn criterion_05_slow_quantities() {
    let (p, rd) = sample_case();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let slow = singular::slow_quantities(&sq, &p).unwrap();

    // Both matching conditions to 1e-14.
    assert!((slow.tau10 + slow.tau20 - sq.e0).abs() < 1e-14);
    assert!((p.b2(p.rho1).unwrap() * slow.tau10 + p.b2(p.rho2).unwrap() * slow.tau20).abs() < 1e-14);
    assert!((sq.e0 - E0).abs() < 1e-15, "e0 = {} (frozen {})", sq.e0, E0);
    assert!((slow.kappa0 - KAPPA0).abs() < 1e-15);
    assert!(
        slow.warnings.len() >= 3,
        "expected mismatch warnings against the quoted closed forms, got {:?}",
        slow.warnings
    );
    pass(
        5,
        "slow-quantities",
        format!(
            "tau10 = {:.12}, tau20 = {:.12}, kappa0 = {:.12}, sum = e0 = {:.12}; {} warnings emitted",
            slow.tau10,
            slow.tau20,
            slow.kappa0,
            sq.e0,
            slow.warnings.len()
        ),
    );
}

#[test]
fn criterion_06_growth_rate_sweep() {
    let (p, rd) = sample_case();
    let start = Instant::now();
    let report = profile::sweep(&rd, &[0.1, 0.05, 0.02, 0.01], &ShootConfig::default(), &p)
        .expect("sweep runs");
    let elapsed = start.elapsed();

    for m in &report.members {
        let pr = m
            .profile
            .as_ref()
            .unwrap_or_else(|| panic!("eps = {} failed: {:?}", m.eps, m.error));
        assert!(
            pr.residual < 1e-6,
            "eps = {}: residual {}",
            m.eps,
            pr.residual
        );
        assert!(pr.max_eps_log_v.is_finite());
    }
    let a = report.extrapolated.expect("extrapolation available");
    let near_matching = (a - report.candidate_matching).abs() <= 0.10 * report.candidate_matching;
    let near_quoted = (a - report.candidate_quoted).abs() <= 0.10 * report.candidate_quoted;
    assert!(
        near_matching ^ near_quoted,
        "extrapolated {a} must be within 10% of exactly one candidate \
         (matching {}, quoted {})",
        report.candidate_matching,
        report.candidate_quoted
    );
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "runtime {elapsed:?} exceeds 2 min"
    );
    let winner = if near_matching {
        "the matching-conditions kappa0"
    } else {
        "the quoted coefficient"
    };
    pass(
        6,
        "growth-rate-sweep",
        format!(
            "per-eps growth {:?}; extrapolated {a:.8} supports {winner} \
             (kappa0 = {:.8}, quoted = {:.8}); {elapsed:?}",
            report
                .members
                .iter()
                .filter_map(|m| m.profile.as_ref().map(|p| (m.eps, p.max_eps_log_v)))
                .collect::<Vec<_>>(),
            report.candidate_matching,
            report.candidate_quoted
        ),
    );
}

#[test]
fn criterion_07_delta_strength() {
    let (p, rd) = sample_case();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let report = shared_sweep();

    // Crossings of r = r0 exist for the members whose spike reaches the
    // section; they must bracket s and contract toward it.
    let mut widths = Vec::new();
    for m in &report.members {
        if let Some(pr) = &m.profile {
            if let Some(c) = pr.crossings {
                assert!(
                    c.xi_in < sq.s && sq.s < c.xi_out,
                    "eps = {}: [{}, {}] does not bracket s",
                    m.eps,
                    c.xi_in,
                    c.xi_out
                );
                widths.push((m.eps, (c.xi_in - sq.s).abs().max((c.xi_out - sq.s).abs())));
            }
        }
    }
    assert!(
        widths.len() >= 2,
        "need at least two members with crossings, got {widths:?}"
    );
    assert!(
        widths.last().unwrap().1 < widths.first().unwrap().1,
        "crossings do not contract: {widths:?}"
    );

    // The eps = 0.01 member carries the measurement.
    let pr = report
        .members
        .iter()
        .find(|m| m.eps == 0.01)
        .and_then(|m| m.profile.as_ref())
        .expect("eps = 0.01 member");
    let wl = weak_limit::analyze(pr, &sq, pr.r0).unwrap();
    let clock = wl.delta_strength_clock.expect("clock identity available");
    let quad = wl
        .delta_strength_quadrature
        .expect("quadrature route available");
    let rel_routes = (quad - clock).abs() / clock.abs();
    assert!(
        rel_routes < 1e-3,
        "quadrature {quad} vs clock identity {clock}: relative {rel_routes}"
    );
    println!(
        "criterion 07 delta-strength: measured inner integral {clock:.6} vs e0 {E0:.6} \
         (relative gap {:+.1}%); routes agree to {rel_routes:.1e}; \
         crossing extents {widths:?}",
        100.0 * (clock - E0) / E0
    );
    println!(
        "criterion 07 note: the inner integral converges to e0 like \
         O(eps log(1/r0)); at the pinned eps = 0.01 and r0 = {} the flank \
         correction is ~10x the stated 5% tolerance, so the next assert \
         states the criterion faithfully and is expected to fail red.",
        pr.r0
    );
    assert!(
        (clock - E0).abs() < 0.05 * E0,
        "inner v-integral {clock:.6} misses e0 = {E0:.6} by {:+.1}% (> 5%): \
         the o(1) flank correction at eps = 0.01, r0 = {} is genuinely larger \
         than the stated tolerance; see the decisions ledger",
        100.0 * (clock - E0) / E0,
        pr.r0
    );
    pass(
        7,
        "delta-strength",
        format!("inner integral {clock:.6} within 5% of e0; routes agree to {rel_routes:.1e}"),
    );
}

#[test]
fn criterion_08_x2_diagnostic() {
    let (p, rd) = sample_case();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let report = shared_sweep();
    let pr = report
        .members
        .iter()
        .find(|m| m.eps == 0.01)
        .and_then(|m| m.profile.as_ref())
        .expect("eps = 0.01 member");

    let x2 = pr.x2_trace();
    let first = *x2.first().unwrap();
    let last = *x2.last().unwrap();
    assert!(
        (first - sq.w_left[1]).abs() < 1e-3,
        "left x2 endpoint {first} vs w2L {}",
        sq.w_left[1]
    );
    assert!(
        (last - sq.w_right[1]).abs() < 1e-3,
        "right x2 endpoint {last} vs w2R {}",
        sq.w_right[1]
    );

    let near = |beta: f64| (beta - p.rho1).abs() <= 0.1 || (beta - p.rho2).abs() <= 0.1;
    let mut total = 0.0;
    let mut concentrated = 0.0;
    for (w, s) in x2.windows(2).zip(pr.samples.windows(2)) {
        let dv = (w[1] - w[0]).abs();
        total += dv;
        if near(s[0].beta) || near(s[1].beta) {
            concentrated += dv;
        }
    }
    let fraction = concentrated / total;
    assert!(
        fraction >= 0.90,
        "only {:.1}% of the x2 variation is concentrated near the densities",
        100.0 * fraction
    );
    pass(
        8,
        "x2-diagnostic",
        format!(
            "endpoints within {:.1e}/{:.1e} of (w2L, w2R); {:.1}% of variation near beta = rho1/rho2",
            (first - sq.w_left[1]).abs(),
            (last - sq.w_right[1]).abs(),
            100.0 * fraction
        ),
    );
}

#[test]
fn criterion_09_lax_friedrichs() {
    let (p, rd) = sample_case();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let grid = Grid1D::new(-1.0, 1.0, 400).unwrap();
    let start = Instant::now();
    let result = fv::run(&rd, &p, grid, 0.05, 20_000, 100).unwrap();
    let elapsed = start.elapsed();
    assert!(result.blow_up_step.is_none());

    let s = &result.series;
    let at = |step: usize| -> usize {
        s.step
            .iter()
            .position(|&x| x == step)
            .unwrap_or_else(|| panic!("step {step} not recorded"))
    };
    let v2000 = s.max_v[at(2000)];
    let v20000 = s.max_v[at(20_000)];
    assert!(
        v20000 > v2000,
        "no growth: max v {v2000} at step 2000 vs {v20000} at step 20000"
    );

    let b0 = s.total_beta[0];
    let worst_beta = s
        .total_beta
        .iter()
        .map(|b| (b - b0).abs() / b0.abs())
        .fold(0.0f64, f64::max);
    assert!(
        worst_beta < 1e-10,
        "beta conservation violated: relative drift {worst_beta:.3e}"
    );
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "runtime {elapsed:?} exceeds 30 s"
    );

    let offsets: Vec<(usize, f64)> = s
        .step
        .iter()
        .zip(&s.centroid_offset)
        .filter(|(st, _)| **st >= 2000)
        .map(|(st, c)| (*st, *c))
        .collect();
    let max_offset = offsets.iter().map(|(_, c)| c.abs()).fold(0.0f64, f64::max);
    let drift_speed = {
        let (s0, c0) = offsets.first().unwrap();
        let (s1, c1) = offsets.last().unwrap();
        (c1 - c0) / (s.t[at(*s1)] - s.t[at(*s0)])
    };
    println!(
        "criterion 09 lax-friedrichs: growth {v2000:.4} -> {v20000:.4}, conservation {worst_beta:.2e}, \
         delta estimate {:.6} vs e0 {E0:.6}, centroid offsets within {max_offset:.4} \
         (2 dx = {:.4}), apparent drift speed {drift_speed:+.4} vs s = {}",
        fv::delta_estimate(&result.final_state, &sq, &rd),
        2.0 * grid.dx,
        sq.s
    );
    println!(
        "criterion 09 note: the centroid of v minus its background sits a \
         first-order smearing offset (~7 dx at 400 cells, CFL 0.05) to the \
         right of the shock line; it converges ~ proportionally to dx and \
         the drift SPEED is ~0 as predicted, but the stated 2-dx bound \
         cannot hold at the pinned resolution. The next assert is faithful \
         and expected to fail red; see the decisions ledger."
    );
    assert!(
        max_offset <= 2.0 * grid.dx,
        "spike centroid strays to {max_offset:.4} from x = s t, beyond 2 dx = {:.4}: \
         first-order smearing asymmetry at the pinned resolution; see the decisions ledger",
        2.0 * grid.dx
    );
    pass(
        9,
        "lax-friedrichs",
        format!("growth, conservation {worst_beta:.2e}, centroid within 2 dx; {elapsed:?}"),
    );
}

#[test]
fn criterion_10_integrator_order_and_reversal() {
    let order = convergence_order(
        &VectorField::TestDecay,
        &[1.0],
        (0.0, 1.0),
        &[(-1.0f64).exp()],
        20,
    )
    .unwrap();
    assert!(
        (4.5..=5.5).contains(&order),
        "measured order {order} outside [4.5, 5.5]"
    );

    let (p, rd) = sample_case();
    let sq = riemann::shock_quantities(&rd, &p).unwrap();
    let field = VectorField::FrozenFastCompact {
        model: p,
        w: sq.w_left,
        xi: sq.s,
    };
    let y0 = [1.5, 0.5];
    let cfg = IntegratorConfig::default();
    let fwd = integrate(&field, &y0, (0.0, 1.0), &cfg, &[]).unwrap();
    let back = integrate(&field, fwd.last_y(), (1.0, 0.0), &cfg, &[]).unwrap();
    let tol = 10.0 * (cfg.rel_tol * y0.iter().fold(0.0f64, |m, x| m.max(x.abs())) + cfg.abs_tol);
    let err = back
        .last_y()
        .iter()
        .zip(&y0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(err <= tol, "round-trip error {err:.3e} exceeds {tol:.3e}");
    pass(
        10,
        "integrator-order-and-reversal",
        format!("measured order {order:.2}; round-trip error {err:.2e} within {tol:.2e}"),
    );
}
