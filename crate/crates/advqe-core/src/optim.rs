//! Small dense BFGS quasi-Newton minimizer.
//!
//! Tuned for the per-step VQE solves: a few dozen parameters, exact
//! (parameter-shift) gradients, smooth trigonometric landscapes, and warm
//! starts close to the optimum. The full inverse Hessian is stored densely;
//! the line search is Armijo backtracking with quadratic interpolation,
//! starting from the natural step of one. Everything is deterministic given
//! the inputs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;

/// Objective with explicit gradients, evaluated through `&mut self` so
/// implementations can reuse scratch buffers.
pub trait Objective {
    /// Cost at `x`.
    fn cost(&mut self, x: &[f64]) -> f64;
    /// Gradient at `x`.
    fn gradient(&mut self, x: &[f64]) -> Vec<f64>;
}

/// Stopping thresholds and budget for one minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    /// Absolute cost value below which the run counts as converged.
    pub cost_tol: f64,
    /// Infinity-norm gradient threshold for convergence.
    pub grad_tol: f64,
    /// Iteration budget.
    pub max_iters: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            cost_tol: 1e-12,
            grad_tol: 1e-8,
            max_iters: 500,
        }
    }
}

/// Result of a BFGS run.
#[derive(Debug, Clone, PartialEq)]
pub struct BfgsOutcome {
    /// Best point found.
    pub x: Vec<f64>,
    /// Cost at the best point.
    pub cost: f64,
    /// Infinity norm of the gradient at the best point.
    pub grad_norm: f64,
    /// Iterations performed.
    pub iterations: usize,
    /// Whether a stopping tolerance was met (rather than the budget or a
    /// stalled line search ending the run).
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| fmath::abs(*x)).fold(0.0, f64::max)
}

/// Minimizes `obj` starting from `x0`.
///
/// Returns [`Error::NonFiniteCost`] if the objective produces NaN or
/// infinity. Running out of budget is not an error; the outcome simply
/// reports `converged: false`.
pub fn minimize_bfgs<O: Objective>(
    obj: &mut O,
    x0: &[f64],
    opts: &BfgsOptions,
) -> Result<BfgsOutcome> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut f = obj.cost(&x);
    if !f.is_finite() {
        return Err(Error::NonFiniteCost { iteration: 0 });
    }
    if n == 0 {
        return Ok(BfgsOutcome {
            x,
            cost: f,
            grad_norm: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let mut g = obj.gradient(&x);

    // Inverse Hessian estimate, row-major.
    let mut hinv = vec![0.0f64; n * n];
    let reset_hinv = |hinv: &mut Vec<f64>, scale: f64| {
        hinv.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            hinv[i * n + i] = scale;
        }
    };
    reset_hinv(&mut hinv, 1.0);
    let mut first_update = true;

    // Stagnation guard: once progress over a long trailing window falls to
    // a hair above nothing, further iterations only polish rounding noise.
    const STALL_WINDOW: usize = 40;
    const STALL_REL: f64 = 1e-5;
    let mut cost_history: Vec<f64> = Vec::new();

    let mut iterations = 0;
    let mut converged = f <= opts.cost_tol || inf_norm(&g) <= opts.grad_tol;

    while !converged && iterations < opts.max_iters {
        cost_history.push(f);
        if iterations >= STALL_WINDOW {
            let past = cost_history[iterations - STALL_WINDOW];
            if past - f <= STALL_REL * fmath::abs(past) {
                break;
            }
        }
        iterations += 1;

        // Search direction p = -Hinv g, falling back to steepest descent
        // whenever the estimate has lost positive definiteness.
        let mut p = vec![0.0f64; n];
        for i in 0..n {
            p[i] = -dot(&hinv[i * n..(i + 1) * n], &g);
        }
        let mut slope = dot(&g, &p);
        // A NaN slope also lands here and triggers the reset.
        if slope >= 0.0 || slope.is_nan() {
            reset_hinv(&mut hinv, 1.0);
            first_update = true;
            for (pi, gi) in p.iter_mut().zip(&g) {
                *pi = -gi;
            }
            slope = dot(&g, &p);
            if slope >= 0.0 || slope.is_nan() {
                // Gradient is numerically zero.
                break;
            }
        }

        // Armijo backtracking with quadratic interpolation.
        const C1: f64 = 1e-4;
        let mut alpha = 1.0f64;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + alpha * pi).collect();
            let f_trial = obj.cost(&trial);
            if !f_trial.is_finite() {
                return Err(Error::NonFiniteCost {
                    iteration: iterations,
                });
            }
            if f_trial <= f + C1 * alpha * slope {
                accepted = Some((trial, f_trial, alpha));
                break;
            }
            // Minimize the quadratic through f, slope and f_trial, clamped
            // away from both ends of the bracket.
            let denom = 2.0 * (f_trial - f - slope * alpha);
            let quad = if denom > 0.0 {
                -slope * alpha * alpha / denom
            } else {
                0.5 * alpha
            };
            alpha = quad.clamp(0.1 * alpha, 0.5 * alpha);
        }

        let Some((x_new, f_new, _alpha)) = accepted else {
            // No decrease representable at this scale; the iterate is as
            // good as the arithmetic allows.
            break;
        };

        let g_new = obj.gradient(&x_new);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let ys = dot(&y, &s);
        let yy = dot(&y, &y);

        // Curvature condition; skip the update (keeping the previous
        // estimate) when the step carries no usable curvature.
        if ys > 1e-12 * fmath::sqrt(yy) * fmath::sqrt(dot(&s, &s)) {
            if first_update {
                reset_hinv(&mut hinv, ys / yy);
                first_update = false;
            }
            let rho = 1.0 / ys;
            // hinv = (I - rho s y^T) hinv (I - rho y s^T) + rho s s^T
            let mut hy = vec![0.0f64; n];
            for i in 0..n {
                hy[i] = dot(&hinv[i * n..(i + 1) * n], &y);
            }
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += rho * rho * yhy * s[i] * s[j] + rho * s[i] * s[j]
                        - rho * (s[i] * hy[j] + hy[i] * s[j]);
                }
            }
        }

        x = x_new;
        f = f_new;
        g = g_new;
        converged = f <= opts.cost_tol || inf_norm(&g) <= opts.grad_tol;
    }

    Ok(BfgsOutcome {
        grad_norm: inf_norm(&g),
        x,
        cost: f,
        iterations,
        converged,
    })
}
