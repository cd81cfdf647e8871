//! Rankine-Hugoniot construction and hypothesis checks for singular
//! shocks.
//!
//! For Riemann data `(u_L, u_R)` with `beta_L != beta_R` the shock speed
//!
//! ```text
//!   s = (v_L B1(beta_L) - v_R B1(beta_R)) / (beta_L - beta_R)
//! ```
//!
//! enforces the first Rankine-Hugoniot condition exactly; the left/right
//! invariants `w = f(u) - s u` then agree in their first component, and
//! the second-component excess `e0 = w_2L - w_2R` measures how badly the
//! jump conditions fail. A positive deficit is the strength of the delta
//! measure that a singular shock must carry.
//!
//! The over-compression condition (all characteristics entering the
//! shock) is
//!
//! ```text
//!   (H1)  Re lambda(u_R) < s < Re lambda(u_L),
//! ```
//!
//! and it is equivalent to `u_R` lying inside the cusped triangular
//! region bounded by the two curves sampled by [`oc_boundary_curves`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, State};

/// Default bound on `|s|` for the structural sufficient condition of
/// [`check_h3_sufficient`]. The authoritative connectivity test is
/// numerical (see the `singular` module); this threshold only gates the
/// quick structural check.
pub const DEFAULT_S_MAX: f64 = 0.05;

/// Riemann data `(u_L, u_R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    pub left: State,
    pub right: State,
}

impl RiemannData {
    pub fn new(left: State, right: State) -> Self {
        RiemannData { left, right }
    }
}

/// Shock speed and Rankine-Hugoniot invariants of a Riemann datum.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShockQuantities {
    pub s: f64,
    pub w_left: [f64; 2],
    pub w_right: [f64; 2],
    /// Second-component Rankine-Hugoniot excess `w_2L - w_2R`.
    pub e0: f64,
}

/// Shock speed `s`; errors on `beta_L == beta_R`.
pub fn shock_speed(rd: &RiemannData, p: &ModelParams) -> Result<f64> {
    let (ul, ur) = (rd.left, rd.right);
    if ul.beta == ur.beta {
        return Err(Error::DegenerateData);
    }
    Ok((ul.v * p.b1(ul.beta)? - ur.v * p.b1(ur.beta)?) / (ul.beta - ur.beta))
}

/// Shock speed plus the invariants `w = f(u) - s u` on both sides and the
/// deficit `e0`.
pub fn shock_quantities(rd: &RiemannData, p: &ModelParams) -> Result<ShockQuantities> {
    let s = shock_speed(rd, p)?;
    let fl = p.flux(rd.left)?;
    let fr = p.flux(rd.right)?;
    let w_left = [fl[0] - s * rd.left.beta, fl[1] - s * rd.left.v];
    let w_right = [fr[0] - s * rd.right.beta, fr[1] - s * rd.right.v];
    Ok(ShockQuantities {
        s,
        w_left,
        w_right,
        e0: w_left[1] - w_right[1],
    })
}

/// Over-compression test `Re lambda(u_R) < s < Re lambda(u_L)` (strict).
/// Degenerate data report `false`.
pub fn check_h1(rd: &RiemannData, p: &ModelParams) -> bool {
    let Ok(s) = shock_speed(rd, p) else {
        return false;
    };
    let re_l = p.char_real_part(rd.left);
    let re_r = p.char_real_part(rd.right);
    re_r < s && s < re_l
}

/// Positive-deficit test `e0 > 0`. Degenerate data report `false`.
pub fn check_h2(rd: &RiemannData, p: &ModelParams) -> bool {
    match shock_quantities(rd, p) {
        Ok(sq) => sq.e0 > 0.0,
        Err(_) => false,
    }
}

/// Boundary curve of the over-compressive region on which the shock speed
/// equals `Re lambda(u_L)`. Returns `None` at poles of the expression.
pub fn oc_curve_left_char(beta: f64, u_left: State, p: &ModelParams) -> Option<f64> {
    let b1 = p.b1(beta).ok()?;
    if b1 == 0.0 {
        return None;
    }
    let b1l = p.b1_raw(u_left.beta);
    let b2l = p.b2_raw(u_left.beta);
    Some(u_left.v * (b1l - 2.0 * b2l * (u_left.beta - beta)) / b1)
}

/// Boundary curve on which the shock speed equals `Re lambda(u_R)`.
pub fn oc_curve_right_char(beta: f64, u_left: State, p: &ModelParams) -> Option<f64> {
    let b1 = p.b1(beta).ok()?;
    let b2 = p.b2_raw(beta);
    let denom = b1 + 2.0 * b2 * (u_left.beta - beta);
    if denom == 0.0 {
        return None;
    }
    Some(u_left.v * p.b1_raw(u_left.beta) / denom)
}

/// A curve sampled over `beta`; entries are `None` where the defining
/// expression has a pole.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledCurve {
    pub beta: Vec<f64>,
    pub v: Vec<Option<f64>>,
}

/// Samples the two boundary curves of the over-compressive region on the
/// open interval `(rho2, beta_L)`.
///
/// Requires `u_L` in the physical strip with `v_L > 0`.
pub fn oc_boundary_curves(
    u_left: State,
    p: &ModelParams,
    n_samples: usize,
) -> Result<(SampledCurve, SampledCurve)> {
    if !p.in_strip(u_left.beta) || u_left.v <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "left state ({}, {}) must lie in the strip [{}, {}] with v > 0",
            u_left.beta, u_left.v, p.rho2, p.rho1
        )));
    }
    let n = n_samples.max(2);
    let mut left_char = SampledCurve {
        beta: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
    };
    let mut right_char = SampledCurve {
        beta: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
    };
    for i in 0..n {
        // Open interval: clip the endpoints away from the poles.
        let t = (i as f64 + 0.5) / n as f64;
        let beta = p.rho2 + t * (u_left.beta - p.rho2);
        left_char.beta.push(beta);
        left_char.v.push(oc_curve_left_char(beta, u_left, p));
        right_char.beta.push(beta);
        right_char.v.push(oc_curve_right_char(beta, u_left, p));
    }
    Ok((left_char, right_char))
}

/// True iff `u_R` lies strictly inside the cusped region bounded by the
/// two curves (which curve is upper is decided numerically per point).
/// `beta_R` outside `(rho2, beta_L)` reports `false`.
pub fn in_overcompressive_region(rd: &RiemannData, p: &ModelParams) -> bool {
    let (ul, ur) = (rd.left, rd.right);
    if !(p.rho2 < ur.beta && ur.beta < ul.beta) {
        return false;
    }
    let (Some(c1), Some(c2)) = (
        oc_curve_left_char(ur.beta, ul, p),
        oc_curve_right_char(ur.beta, ul, p),
    ) else {
        return false;
    };
    let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
    lo < ur.v && ur.v < hi
}

/// Sign conditions `s rho1 + w_1L < 0` and `s rho2 + w_1R < 0` that make
/// the strip boundaries one-way for the frozen fast flow. Implied by the
/// over-compression condition.
pub fn boundary_sign_check(sq: &ShockQuantities, p: &ModelParams) -> bool {
    sq.s * p.rho1 + sq.w_left[0] < 0.0 && sq.s * p.rho2 + sq.w_right[0] < 0.0
}

/// Structural sufficient condition for the existence of the two
/// connecting trajectories: `beta_R < sqrt(rho1 rho2) < beta_L`,
/// `w_1L < 0`, `w_2R < 0 < w_2L`, and `|s| < s_max`.
///
/// Sufficient, not necessary; the numerical test in the `singular`
/// module is authoritative.
pub fn check_h3_sufficient(
    rd: &RiemannData,
    sq: &ShockQuantities,
    p: &ModelParams,
    s_max: f64,
) -> bool {
    let sonic = p.beta_sonic();
    rd.right.beta < sonic
        && sonic < rd.left.beta
        && sq.w_left[0] < 0.0
        && sq.w_right[1] < 0.0
        && sq.w_left[1] > 0.0
        && sq.s.abs() < s_max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample_case;
    use proptest::prelude::*;

    #[test]
    fn sample_shock_speed_is_exactly_zero() {
        let (p, rd) = sample_case();
        assert_eq!(shock_speed(&rd, &p).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_data_is_an_error() {
        let (p, rd) = sample_case();
        let bad = RiemannData::new(rd.left, rd.left);
        assert!(matches!(shock_speed(&bad, &p), Err(Error::DegenerateData)));
        assert!(!check_h1(&bad, &p));
        assert!(!check_h2(&bad, &p));
    }

    #[test]
    fn sample_invariants_frozen_values() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        assert!((sq.w_left[0] - (-0.04736842105263158)).abs() < 1e-16);
        assert!((sq.w_left[1] - 0.22299168975069253).abs() < 1e-16);
        assert!((sq.w_right[1] - (-0.10941828254847645)).abs() < 1e-16);
        assert!((sq.e0 - 0.33240997229916897).abs() < 1e-16);
        // Two-decimal rounding used in quick summaries.
        assert!((sq.w_left[0] - (-0.05)).abs() < 0.005);
        assert!((sq.w_left[1] - 0.22).abs() < 0.005);
        assert!((sq.w_right[0] - (-0.05)).abs() < 0.005);
        assert!((sq.w_right[1] - (-0.11)).abs() < 0.005);
    }

    #[test]
    fn first_rh_component_matches_by_construction() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        assert!((sq.w_left[0] - sq.w_right[0]).abs() < 1e-15);
    }

    #[test]
    fn sample_hypotheses_hold() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        assert!(check_h1(&rd, &p));
        assert!(check_h2(&rd, &p));
        assert!(check_h3_sufficient(&rd, &sq, &p, DEFAULT_S_MAX));
        assert!(boundary_sign_check(&sq, &p));
        assert!(in_overcompressive_region(&rd, &p));
    }

    #[test]
    fn h2_antisymmetric_under_swap() {
        let (p, rd) = sample_case();
        let swapped = RiemannData::new(rd.right, rd.left);
        assert!(check_h2(&rd, &p));
        assert!(!check_h2(&swapped, &p));
        let sq = shock_quantities(&rd, &p).unwrap();
        let sq_swapped = shock_quantities(&swapped, &p).unwrap();
        assert!((sq.e0 + sq_swapped.e0).abs() < 1e-15);
    }

    #[test]
    fn structural_h3_threshold_is_strict() {
        let (p, rd) = sample_case();
        let sq = shock_quantities(&rd, &p).unwrap();
        assert!(!check_h3_sufficient(&rd, &sq, &p, 0.0));
    }

    #[test]
    fn structural_h3_fails_past_sonic_point() {
        let (p, rd) = sample_case();
        // beta_R above sqrt(rho1 rho2) violates the hypothesis.
        let bad = RiemannData::new(rd.left, State::new(1.6, rd.right.v));
        let sq = shock_quantities(&bad, &p).unwrap();
        assert!(!check_h3_sufficient(&bad, &sq, &p, DEFAULT_S_MAX));
    }

    #[test]
    fn curves_meet_left_state() {
        let (p, rd) = sample_case();
        let ul = rd.left;
        for curve in [oc_curve_left_char, oc_curve_right_char] {
            let v = curve(ul.beta - 1e-9, ul, &p).unwrap();
            assert!((v - ul.v).abs() < 1e-6);
        }
    }

    #[test]
    fn curve_frozen_value_at_midpoint() {
        let (p, rd) = sample_case();
        // Direct arithmetic: v = (B1(1.9) - 2 B2(1.9) * 0.4) / B1(1.5).
        let expected = (p.b1(1.9).unwrap() - 2.0 * p.b2(1.9).unwrap() * 0.4) / p.b1(1.5).unwrap();
        assert!((expected - 1.3545706371191135).abs() < 1e-14);
        let v = oc_curve_left_char(1.5, rd.left, &p).unwrap();
        assert!((v - expected).abs() < 1e-14);
        let v = oc_curve_right_char(1.5, rd.left, &p).unwrap();
        assert!((v - 0.38755980861244044).abs() < 1e-14);
    }

    // On the boundary curves the shock speed coincides with the
    // characteristic real part of the matching side.
    #[test]
    fn curves_carry_characteristic_speed() {
        let (p, rd) = sample_case();
        let ul = rd.left;
        for i in 1..40 {
            let beta = p.rho2 + (i as f64 / 40.0) * (ul.beta - p.rho2);
            if let Some(v) = oc_curve_left_char(beta, ul, &p) {
                let rd_b = RiemannData::new(ul, State::new(beta, v));
                let s = shock_speed(&rd_b, &p).unwrap();
                assert!(
                    (s - p.char_real_part(ul)).abs() < 1e-10,
                    "left-char curve mismatch at beta = {beta}"
                );
            }
            if let Some(v) = oc_curve_right_char(beta, ul, &p) {
                let rd_b = RiemannData::new(ul, State::new(beta, v));
                let s = shock_speed(&rd_b, &p).unwrap();
                let re_r = p.char_real_part(State::new(beta, v));
                assert!(
                    (s - re_r).abs() < 1e-10,
                    "right-char curve mismatch at beta = {beta}"
                );
            }
        }
    }

    #[test]
    fn boundary_point_fails_strict_h1() {
        let (p, rd) = sample_case();
        let beta = rd.right.beta;
        let v = oc_curve_right_char(beta, rd.left, &p).unwrap();
        let boundary = RiemannData::new(rd.left, State::new(beta, v));
        assert!(!check_h1(&boundary, &p));
        assert!(!in_overcompressive_region(&boundary, &p));
    }

    #[test]
    fn hand_built_sign_check_fails() {
        let (p, _) = sample_case();
        let sq = ShockQuantities {
            s: 0.0,
            w_left: [1.0, 0.2],
            w_right: [1.0, -0.1],
            e0: 0.3,
        };
        assert!(!boundary_sign_check(&sq, &p));
    }

    // Region membership built from the curves agrees with the direct
    // eigenvalue inequality away from the boundary; H1 implies H2 and the
    // boundary sign conditions with no counterexamples.
    #[test]
    fn grid_equivalence_and_implications() {
        let (p, rd) = sample_case();
        let ul = rd.left;
        let n = 50;
        let mut checked = 0;
        for i in 0..n {
            for j in 0..n {
                let beta = p.rho2 + (i as f64 + 0.5) / n as f64 * (ul.beta - p.rho2);
                let v = (j as f64 + 0.5) / n as f64 * 2.0 * ul.v;
                let dist = [
                    oc_curve_left_char(beta, ul, &p),
                    oc_curve_right_char(beta, ul, &p),
                ]
                .iter()
                .filter_map(|c| c.map(|cv| (v - cv).abs()))
                .fold(f64::INFINITY, f64::min);
                if dist < 1e-6 {
                    continue;
                }
                let cand = RiemannData::new(ul, State::new(beta, v));
                let h1 = check_h1(&cand, &p);
                assert_eq!(
                    in_overcompressive_region(&cand, &p),
                    h1,
                    "disagreement at ({beta}, {v})"
                );
                if h1 {
                    let sq = shock_quantities(&cand, &p).unwrap();
                    assert!(check_h2(&cand, &p), "H1 without H2 at ({beta}, {v})");
                    assert!(
                        boundary_sign_check(&sq, &p),
                        "H1 without boundary signs at ({beta}, {v})"
                    );
                }
                checked += 1;
            }
        }
        assert!(checked > 2000);
    }

    proptest! {
        // First RH component always matches, and e0 is antisymmetric.
        #[test]
        fn rh_first_component(bl in 1.05f64..1.99, br in 1.01f64..1.99, vl in 0.05f64..2.0, vr in 0.05f64..2.0) {
            prop_assume!((bl - br).abs() > 1e-3);
            let p = ModelParams::new(2.0, 1.0).unwrap();
            let rd = RiemannData::new(State::new(bl, vl), State::new(br, vr));
            let sq = shock_quantities(&rd, &p).unwrap();
            let scale = 1.0 + sq.s.abs().max(vl.max(vr));
            prop_assert!((sq.w_left[0] - sq.w_right[0]).abs() < 1e-12 * scale);
            let swapped = shock_quantities(&RiemannData::new(rd.right, rd.left), &p).unwrap();
            prop_assert!((sq.e0 + swapped.e0).abs() < 1e-12 * scale);
        }
    }
}
