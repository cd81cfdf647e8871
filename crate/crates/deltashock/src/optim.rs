//! Derivative-free simplex minimization (Nelder-Mead).
//!
//! The shooting objective is smooth but reaches the caller through an
//! adaptive integrator, so its finite-difference gradients are noisy;
//! a simplex search with restarts is the reliable tool here.

/// Stopping rules and iteration budget.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iters: usize,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    /// Stop when the spread of function values falls below this.
    pub f_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iters: 400,
            x_tol: 1e-13,
            f_tol: 1e-16,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0`, building the initial simplex by stepping
/// `steps[i]` along each coordinate.
pub fn minimize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    opts: &SimplexOptions,
) -> OptimResult {
    let n = x0.len();
    assert!(n >= 1 && steps.len() == n);
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        let mut xi = x0.to_vec();
        xi[i] += steps[i];
        let fi = eval(&xi, &mut evals);
        simplex.push((xi, fi));
    }

    let mut converged = false;
    for _ in 0..opts.max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        let spread = simplex[n].1 - simplex[0].1;
        if diam < opts.x_tol || spread.abs() < opts.f_tol {
            converged = true;
            break;
        }

        // Centroid of all but the worst point.
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for i in 0..n {
                centroid[i] += x[i] / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let point_at = |coef: f64, centroid: &[f64], worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = point_at(REFLECT, &centroid, &worst.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = point_at(EXPAND, &centroid, &worst.0);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            // Contract toward the better of worst/reflected.
            let (base, fbase) = if fr < worst.1 {
                (&xr, fr)
            } else {
                (&worst.0, worst.1)
            };
            let xc: Vec<f64> = centroid
                .iter()
                .zip(base)
                .map(|(c, b)| c + CONTRACT * (b - c))
                .collect();
            let fc = eval(&xc, &mut evals);
            if fc < fbase {
                simplex[n] = (xc, fc);
            } else {
                // Shrink everything toward the best point.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (xi, bi) in entry.0.iter_mut().zip(&best) {
                        *xi = bi + SHRINK * (*xi - bi);
                    }
                    entry.1 = eval(&entry.0, &mut evals);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    OptimResult {
        x: simplex[0].0.clone(),
        f: simplex[0].1,
        evals,
        converged,
    }
}

/// [`minimize`] with a few fresh-simplex restarts around the running best
/// point; each restart shrinks the initial steps.
pub fn minimize_with_restarts(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    opts: &SimplexOptions,
    restarts: usize,
) -> OptimResult {
    let mut best = minimize(f, x0, steps, opts);
    let mut scale = 0.1;
    for _ in 0..restarts {
        let steps_r: Vec<f64> = steps.iter().map(|s| s * scale).collect();
        let next = minimize(f, &best.x, &steps_r, opts);
        let evals = best.evals + next.evals;
        if next.f < best.f {
            best = next;
        }
        best.evals = evals;
        scale *= 0.1;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let mut f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2);
        let r = minimize(&mut f, &[0.0, 0.0], &[0.5, 0.5], &SimplexOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6, "x = {:?}", r.x);
        assert!((r.x[1] + 2.0).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock_valley() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = SimplexOptions {
            max_iters: 2000,
            ..Default::default()
        };
        let r = minimize_with_restarts(&mut f, &[-1.2, 1.0], &[0.5, 0.5], &opts, 2);
        assert!((r.x[0] - 1.0).abs() < 1e-5, "x = {:?}, f = {}", r.x, r.f);
        assert!((r.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn nan_objective_treated_as_infinite() {
        let mut f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                x[0] * x[0]
            }
        };
        let r = minimize(&mut f, &[1.0], &[0.5], &SimplexOptions::default());
        assert!(r.x[0].abs() < 1e-5);
    }
}
