//! Geometry of the over-compressive region: sample its two boundary
//! curves and verify on a grid that the curve-based membership test
//! agrees with the direct eigenvalue inequality.
//!
//! ```bash
//! cargo run --release --example oc_region
//! ```

use deltashock::model::State;
use deltashock::riemann::{
    check_h1, in_overcompressive_region, oc_boundary_curves, oc_curve_left_char,
    oc_curve_right_char, RiemannData,
};
use deltashock::sample_case;

fn main() {
    let (p, rd) = sample_case();
    let ul = rd.left;

    let (left_char, right_char) = oc_boundary_curves(ul, &p, 9).unwrap();
    println!("boundary curves of the over-compressive region below u_L = (1.9, 1.0):");
    println!("{:>8} {:>14} {:>14}", "beta", "s=Re(lam(u_L))", "s=Re(lam(u_R))");
    for i in 0..left_char.beta.len() {
        println!(
            "{:>8.4} {:>14.6} {:>14.6}",
            left_char.beta[i],
            left_char.v[i].unwrap_or(f64::NAN),
            right_char.v[i].unwrap_or(f64::NAN),
        );
    }

    // Grid agreement between the region geometry and the inequality.
    let n = 120;
    let mut agree = 0;
    let mut near_boundary = 0;
    let mut inside = 0;
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
                near_boundary += 1;
                continue;
            }
            let cand = RiemannData::new(ul, State::new(beta, v));
            let by_curves = in_overcompressive_region(&cand, &p);
            if by_curves == check_h1(&cand, &p) {
                agree += 1;
            }
            if by_curves {
                inside += 1;
            }
        }
    }
    println!(
        "\n{n}x{n} grid: {agree}/{} points agree with the eigenvalue test \
         ({near_boundary} skipped near the curves); {inside} lie inside the region",
        n * n - near_boundary
    );
    println!(
        "the bundled u_R = ({}, {:.6}) is inside: {}",
        rd.right.beta,
        rd.right.v,
        in_overcompressive_region(&rd, &p)
    );
}
