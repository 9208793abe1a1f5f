//! Limited-memory BFGS with backtracking (Armijo) line search.
//!
//! The design stages hand in smooth unconstrained problems; bounds such as
//! `ρ < 1` are handled by the caller through reparameterization.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    pub max_iterations: usize,
    /// Stop when the gradient infinity norm falls to this value.
    pub gradient_tolerance: f64,
    pub initial_step: f64,
    pub backtracking_factor: f64,
    pub sufficient_decrease: f64,
    /// Number of correction pairs kept by L-BFGS.
    pub memory: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            gradient_tolerance: 1e-8,
            initial_step: 1.0,
            backtracking_factor: 0.5,
            sufficient_decrease: 1e-4,
            memory: 10,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iterations > 0
            && self.gradient_tolerance > 0.0
            && self.initial_step > 0.0
            && self.backtracking_factor > 0.0
            && self.backtracking_factor < 1.0
            && self.sufficient_decrease > 0.0
            && self.sufficient_decrease < 1.0
            && self.memory > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "invalid optimizer settings {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradientTolerance,
    MaxIterations,
    /// No step along the search direction decreased the cost.
    LineSearchStalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub iterations: usize,
    pub initial_cost: f64,
    pub final_cost: f64,
    pub final_gradient_norm: f64,
    pub termination: Termination,
    /// Accepted cost at every iteration, starting with the initial cost.
    pub cost_history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Minimizes `f`, which returns the cost and writes the gradient into its second argument.
///
/// Costs are non-increasing along the run; the best iterate is returned.
/// A trial point with non-finite cost is treated as a failed step, while a
/// non-finite cost at `x0` or a non-finite gradient is a divergence.
pub fn minimize<F>(
    mut f: F,
    x0: &[f64],
    settings: &OptimizerSettings,
) -> Result<(Vec<f64>, OptimizationReport)>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    settings.validate()?;
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    if !fx.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence {
            iterations: 0,
            last_cost: fx,
            last_iterate: x,
        });
    }
    let initial_cost = fx;
    let mut history = vec![fx];
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(settings.memory);
    let mut termination = Termination::MaxIterations;
    let mut iterations = 0;

    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut dir = vec![0.0; n];
    let mut alpha = vec![0.0; settings.memory];

    while iterations < settings.max_iterations {
        if n == 0 || inf_norm(&g) <= settings.gradient_tolerance {
            termination = Termination::GradientTolerance;
            break;
        }
        // two-loop recursion
        dir.iter_mut().zip(&g).for_each(|(d, gi)| *d = -gi);
        for (i, (s, y, rho)) in pairs.iter().enumerate().rev() {
            let a = rho * dot(s, &dir);
            alpha[i] = a;
            dir.iter_mut().zip(y).for_each(|(d, yi)| *d -= a * yi);
        }
        let gamma = match pairs.back() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => 1.0 / dot(&g, &g).sqrt().max(1.0),
        };
        dir.iter_mut().for_each(|d| *d *= gamma);
        for (i, (s, y, rho)) in pairs.iter().enumerate() {
            let b = rho * dot(y, &dir);
            dir.iter_mut()
                .zip(s)
                .for_each(|(d, si)| *d += (alpha[i] - b) * si);
        }
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 || slope.is_nan() {
            pairs.clear();
            dir.iter_mut()
                .zip(&g)
                .for_each(|(d, gi)| *d = -gi / dot(&g, &g).sqrt().max(1.0));
            slope = dot(&g, &dir);
        }

        let mut step = settings.initial_step;
        let mut accepted = None;
        for _ in 0..80 {
            x_new
                .iter_mut()
                .zip(&x)
                .zip(&dir)
                .for_each(|((xn, xi), di)| *xn = xi + step * di);
            let f_trial = f(&x_new, &mut g_new);
            if f_trial.is_finite() && f_trial <= fx + settings.sufficient_decrease * step * slope {
                accepted = Some(f_trial);
                break;
            }
            step *= settings.backtracking_factor;
        }
        let Some(f_next) = accepted else {
            termination = Termination::LineSearchStalled;
            break;
        };
        if g_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence {
                iterations,
                last_cost: fx,
                last_iterate: x,
            });
        }
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if pairs.len() == settings.memory {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / sy));
        }
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        fx = f_next;
        history.push(fx);
        iterations += 1;
    }
    if iterations == settings.max_iterations && inf_norm(&g) <= settings.gradient_tolerance {
        termination = Termination::GradientTolerance;
    }

    let report = OptimizationReport {
        iterations,
        initial_cost,
        final_cost: fx,
        final_gradient_norm: inf_norm(&g),
        termination,
        cost_history: history,
    };
    Ok((x, report))
}

/// Compares the analytic gradient with central differences of step `h`.
///
/// Returns `max_i |fd_i − g_i| / ‖g‖∞`, the worst discrepancy relative to
/// the gradient's largest component.
pub fn check_gradient<F>(mut f: F, x: &[f64], h: f64) -> f64
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x.len();
    let mut g = vec![0.0; n];
    f(x, &mut g);
    let mut scratch = vec![0.0; n];
    let mut xp = x.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        xp[i] = x[i] + h;
        let fp = f(&xp, &mut scratch);
        xp[i] = x[i] - h;
        let fm = f(&xp, &mut scratch);
        xp[i] = x[i];
        let fd = (fp - fm) / (2.0 * h);
        worst = worst.max((fd - g[i]).abs());
    }
    let scale = inf_norm(&g).max(f64::MIN_POSITIVE);
    worst / scale
}
