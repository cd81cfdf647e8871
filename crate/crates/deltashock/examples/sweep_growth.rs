//! Sweep eps downward and extrapolate the spike growth rate
//! `max eps log v` to eps = 0, adjudicating between the two candidate
//! limits (which differ by a factor of two).
//!
//! ```bash
//! cargo run --release --example sweep_growth
//! ```

use deltashock::profile::{sweep, ShootConfig};
use deltashock::sample_case;

fn main() {
    let (p, rd) = sample_case();
    let eps_list = [0.1, 0.05, 0.02, 0.01];
    let start = std::time::Instant::now();
    let report = sweep(&rd, &eps_list, &ShootConfig::default(), &p).expect("sweep runs");
    println!("sweep of {} members in {:?}\n", eps_list.len(), start.elapsed());

    println!(
        "{:>6} {:>16} {:>12} {:>10} {:>12} {:>12}",
        "eps", "max eps log v", "residual", "r_min", "xi_in", "xi_out"
    );
    for m in &report.members {
        match &m.profile {
            Some(pr) => println!(
                "{:>6} {:>16.10} {:>12.2e} {:>10.3e} {:>12} {:>12}",
                m.eps,
                pr.max_eps_log_v,
                pr.residual,
                pr.r_min,
                pr.crossings
                    .map(|c| format!("{:+.6}", c.xi_in))
                    .unwrap_or_else(|| "-".into()),
                pr.crossings
                    .map(|c| format!("{:+.6}", c.xi_out))
                    .unwrap_or_else(|| "-".into()),
            ),
            None => println!("{:>6} FAILED: {}", m.eps, m.error.as_deref().unwrap_or("?")),
        }
    }

    let a = report.extrapolated.expect("extrapolation available");
    println!("\nlinear extrapolation to eps = 0: {a:.10}");
    println!(
        "candidate limits: matching-conditions kappa0 = {:.10}, quoted coefficient = {:.10}",
        report.candidate_matching, report.candidate_quoted
    );
    println!(
        "verdict (within {:.0}%): {:?}",
        100.0 * report.rel_tol,
        report.verdict
    );
}
