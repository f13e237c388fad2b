//! Derivative-free local refinement and deterministic sphere lattices.
//!
//! The objectives in this workspace are cheap, low dimensional and only
//! piecewise smooth (eigenvalue crossings), so a Nelder–Mead simplex with a
//! couple of restarts is the refinement of choice.

use argmin::core::{CostFunction, Error, Executor, State, TerminationReason};
use argmin::solver::neldermead::NelderMead;

use crate::cmatrix::C64;

/// Outcome of a local minimization.
#[derive(Debug, Clone)]
pub struct LocalMin {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
    /// False when the iteration cap was hit before the simplex collapsed.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    /// Edge length of the initial simplex.
    pub step: f64,
    /// Stop once the spread of simplex values falls below this.
    pub sd_tol: f64,
    pub max_iters: u64,
    /// Number of extra runs restarted from the incumbent with a shrunken simplex.
    pub restarts: usize,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions {
            step: 0.05,
            sd_tol: 1e-15,
            max_iters: 4000,
            restarts: 2,
        }
    }
}

struct Objective<'a, F>(&'a F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Objective<'_, F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> Result<f64, Error> {
        Ok((self.0)(x))
    }
}

fn simplex(x0: &[f64], step: f64) -> Vec<Vec<f64>> {
    let mut pts = vec![x0.to_vec()];
    for k in 0..x0.len() {
        let mut p = x0.to_vec();
        p[k] += step;
        pts.push(p);
    }
    pts
}

fn run_once<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], step: f64, opts: &NmOptions) -> LocalMin {
    let fallback = LocalMin {
        x: x0.to_vec(),
        value: f(x0),
        iterations: 0,
        converged: false,
    };
    let solver = match NelderMead::new(simplex(x0, step)).with_sd_tolerance(opts.sd_tol) {
        Ok(s) => s,
        Err(_) => return fallback,
    };
    let res = match Executor::new(Objective(f), solver)
        .configure(|s| s.max_iters(opts.max_iters))
        .run()
    {
        Ok(r) => r,
        Err(_) => return fallback,
    };
    let state = res.state();
    let converged = !matches!(state.get_termination_reason(), Some(TerminationReason::MaxItersReached));
    match state.get_best_param() {
        Some(x) if state.get_best_cost() <= fallback.value => LocalMin {
            x: x.clone(),
            value: state.get_best_cost(),
            iterations: state.get_iter(),
            converged,
        },
        _ => LocalMin { converged, ..fallback },
    }
}

/// Nelder–Mead from `x0`, restarted from the incumbent with shrinking steps.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], opts: &NmOptions) -> LocalMin {
    let mut best = run_once(f, x0, opts.step, opts);
    let mut step = opts.step;
    for _ in 0..opts.restarts {
        step *= 0.1;
        let next = run_once(f, &best.x, step, opts);
        let iterations = best.iterations + next.iterations;
        if next.value <= best.value {
            best = LocalMin { iterations, ..next };
        } else {
            best.iterations = iterations;
        }
    }
    best
}

/// `n` points of a Fibonacci lattice on the phase-reduced unit sphere of C²,
/// returned as `(t, θ)` with `β = (cos t, e^{iθ} sin t)`, `t ∈ [0, π/2]`.
///
/// The lattice is equal-area on the Bloch sphere (`cos 2t` is the height).
pub fn fibonacci_bloch(n: usize) -> Vec<(f64, f64)> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..n)
        .map(|k| {
            let h = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let t = 0.5 * h.clamp(-1.0, 1.0).acos();
            let theta = (2.0 * std::f64::consts::PI * k as f64 / golden).rem_euclid(2.0 * std::f64::consts::PI);
            (t, theta)
        })
        .collect()
}

/// Unit vector of C² for the Bloch coordinates `(t, θ)`.
pub fn bloch_vector(t: f64, theta: f64) -> [C64; 2] {
    [C64::new(t.cos(), 0.0), C64::from_polar(t.sin(), theta)]
}

/// Interprets `2n` reals as a vector of C^n and normalizes it.
pub fn unit_from_reals(x: &[f64]) -> Option<Vec<C64>> {
    let v: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    crate::normalize(&v)
}

/// Flattens a complex vector into interleaved real and imaginary parts.
pub fn reals_from_complex(v: &[C64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}
