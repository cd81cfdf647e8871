//! Classify the bundled Riemann data: Rankine-Hugoniot quantities,
//! over-compression, deficit, and the structural connection test.
//!
//! ```bash
//! cargo run --release --example classify
//! ```

use deltashock::riemann::{
    boundary_sign_check, check_h1, check_h2, check_h3_sufficient, in_overcompressive_region,
    shock_quantities, DEFAULT_S_MAX,
};
use deltashock::sample_case;
use deltashock::weak_limit::spacetime_delta_coefficient;

fn main() {
    let (p, rd) = sample_case();
    println!(
        "densities (rho1, rho2) = ({}, {}), u_L = ({}, {}), u_R = ({}, {})",
        p.rho1, p.rho2, rd.left.beta, rd.left.v, rd.right.beta, rd.right.v
    );

    let sq = shock_quantities(&rd, &p).expect("distinct beta values");
    println!("\nshock speed        s   = {}", sq.s);
    println!("left invariants    w_L = ({:.16}, {:.16})", sq.w_left[0], sq.w_left[1]);
    println!("right invariants   w_R = ({:.16}, {:.16})", sq.w_right[0], sq.w_right[1]);
    println!("deficit            e0  = {:.16}", sq.e0);

    println!("\nover-compression (H1)            : {}", check_h1(&rd, &p));
    println!("positive deficit (H2)            : {}", check_h2(&rd, &p));
    println!(
        "structural connection test (H3') : {}",
        check_h3_sufficient(&rd, &sq, &p, DEFAULT_S_MAX)
    );
    println!(
        "curve-based region membership    : {}",
        in_overcompressive_region(&rd, &p)
    );
    println!("strip boundary signs             : {}", boundary_sign_check(&sq, &p));
    println!(
        "\nspace-time delta coefficient e0/sqrt(1+s^2) = {:.16}",
        spacetime_delta_coefficient(&sq)
    );
    println!("-> all excess momentum accumulates on the shock line x = {} t", sq.s);
}
