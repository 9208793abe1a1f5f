//! Weighted group-delay and phase-transfer costs with analytic gradients.
//!
//! Both costs are trapezoid sums over the periodic grid. Grid points with
//! zero weight contribute nothing and are dropped up front.
//!
//! For a section with pole `ρe^{jθ}`, writing `c = cos(ω−θ)`,
//! `s = sin(ω−θ)` and `d = 1 + ρ² − 2ρc`:
//!
//! * phase `ψ = −ω − 2·atan2(ρs, 1 − ρc)`, `∂ψ/∂ρ = −2s/d`, `∂ψ/∂θ = 2ρ(c − ρ)/d`
//! * delay `τ = (1 − ρ²)/d`, `∂τ/∂ρ = 2(c(1 + ρ²) − 2ρ)/d²`, `∂τ/∂θ = 2ρ(1 − ρ²)s/d²`

use std::f64::consts::PI;

use num_complex::Complex64;

use super::target::{desired_group_delay, SubbandSpec};
use super::weighting::{FrequencyGrid, WeightingSpec};
use crate::allpass::AllpassSection;
use crate::channel::subband_cd_response;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Point {
    weight: f64,
    cos: f64,
    sin: f64,
    target_delay: f64,
    /// `H(ω)·e^{jβ'(ω − k'π)}·e^{−jNω}`: everything in the phase-transfer
    /// product except the pole-dependent factors and `e^{jφ₀}`.
    base: Complex64,
}

/// Pre-evaluated quadrature data for one band.
#[derive(Debug, Clone)]
pub struct BandProblem {
    pub spec: SubbandSpec,
    points: Vec<Point>,
    dw: f64,
    weight_total: f64,
}

impl BandProblem {
    pub fn new(
        spec: &SubbandSpec,
        weighting: &WeightingSpec,
        grid: &FrequencyGrid,
    ) -> Result<Self> {
        weighting.validate()?;
        let n = spec.n_sections as f64;
        let beta = spec.beta_prime as f64;
        let kp = spec.k_prime as f64;
        let mut points = Vec::new();
        for w in grid.points() {
            let weight = weighting.weight(w);
            if weight <= 0.0 {
                continue;
            }
            let h = subband_cd_response(spec.alpha_prime, spec.k_prime, w);
            let rot = Complex64::from_polar(1.0, beta * (w - kp * PI) - n * w);
            points.push(Point {
                weight,
                cos: w.cos(),
                sin: w.sin(),
                target_delay: desired_group_delay(spec, w),
                base: h * rot,
            });
        }
        let weight_total = points.iter().map(|p| p.weight).sum();
        Ok(Self {
            spec: *spec,
            points,
            dw: grid.spacing(),
            weight_total,
        })
    }

    pub fn n_sections(&self) -> usize {
        self.spec.n_sections
    }

    /// Group-delay MSE for raw pole parameters; gradient is written as `[∂ρ…, ∂θ…]`.
    pub fn gd_cost_raw(
        &self,
        rho: &[f64],
        theta: &[f64],
        grad_rho: &mut [f64],
        grad_theta: &mut [f64],
    ) -> f64 {
        let trig: Vec<(f64, f64)> = theta.iter().map(|t| (t.cos(), t.sin())).collect();
        grad_rho.iter_mut().for_each(|g| *g = 0.0);
        grad_theta.iter_mut().for_each(|g| *g = 0.0);
        let mut cost = 0.0;
        for p in &self.points {
            let mut tau = 0.0;
            for (&r, &(ct, st)) in rho.iter().zip(&trig) {
                let c = p.cos * ct + p.sin * st;
                tau += (1.0 - r * r) / (1.0 + r * r - 2.0 * r * c);
            }
            let e = p.target_delay - tau;
            cost += p.weight * e * e;
            let f = -2.0 * p.weight * e * self.dw;
            for (i, (&r, &(ct, st))) in rho.iter().zip(&trig).enumerate() {
                let c = p.cos * ct + p.sin * st;
                let s = p.sin * ct - p.cos * st;
                let d = 1.0 + r * r - 2.0 * r * c;
                let d2 = d * d;
                grad_rho[i] += f * 2.0 * (c * (1.0 + r * r) - 2.0 * r) / d2;
                grad_theta[i] += f * 2.0 * r * (1.0 - r * r) * s / d2;
            }
        }
        cost * self.dw
    }

    /// Weighted `Σ W·A(ω)` with `A = G·H·e^{jβ'(ω − k'π)}`, times the grid spacing.
    fn weighted_transfer(&self, rho: &[f64], theta: &[f64]) -> Complex64 {
        let trig: Vec<(f64, f64)> = theta.iter().map(|t| (t.cos(), t.sin())).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.points {
            acc += self.transfer_at(p, rho, &trig) * p.weight;
        }
        acc * self.dw
    }

    fn transfer_at(&self, p: &Point, rho: &[f64], trig: &[(f64, f64)]) -> Complex64 {
        let mut z = p.base;
        for (&r, &(ct, st)) in rho.iter().zip(trig) {
            let c = p.cos * ct + p.sin * st;
            let s = p.sin * ct - p.cos * st;
            let a = 1.0 - r * c;
            let b = r * s;
            let d = a * a + b * b;
            z *= Complex64::new((a * a - b * b) / d, -2.0 * a * b / d);
        }
        z
    }

    /// Phase-transfer MSE `Σ W·|A·e^{jφ₀} − 1|²·Δω` and its gradient.
    pub fn phase_cost_raw(
        &self,
        rho: &[f64],
        theta: &[f64],
        phi0: f64,
        grad_rho: &mut [f64],
        grad_theta: &mut [f64],
    ) -> (f64, f64) {
        let trig: Vec<(f64, f64)> = theta.iter().map(|t| (t.cos(), t.sin())).collect();
        let rot = Complex64::from_polar(1.0, phi0);
        grad_rho.iter_mut().for_each(|g| *g = 0.0);
        grad_theta.iter_mut().for_each(|g| *g = 0.0);
        let mut cost = 0.0;
        let mut g_phi = 0.0;
        for p in &self.points {
            let z = self.transfer_at(p, rho, &trig) * rot;
            // |z| = 1, so |z − 1|² = 2(1 − cos ε) and sin ε = Im z
            cost += p.weight * 2.0 * (1.0 - z.re);
            let f = 2.0 * p.weight * z.im * self.dw;
            g_phi += f;
            for (i, (&r, &(ct, st))) in rho.iter().zip(&trig).enumerate() {
                let c = p.cos * ct + p.sin * st;
                let s = p.sin * ct - p.cos * st;
                let d = 1.0 + r * r - 2.0 * r * c;
                grad_rho[i] += f * (-2.0 * s / d);
                grad_theta[i] += f * (2.0 * r * (c - r) / d);
            }
        }
        (cost * self.dw, g_phi)
    }

    /// Closed-form minimizer of the phase-transfer cost over `φ₀` alone.
    pub fn optimal_phi0_raw(&self, rho: &[f64], theta: &[f64]) -> Result<f64> {
        let integral = self.weighted_transfer(rho, theta);
        if integral.norm() <= 1e-12 * self.weight_total * self.dw || !integral.norm().is_finite() {
            return Err(Error::AmbiguousPhase);
        }
        Ok(-integral.arg())
    }
}

fn split(sections: &[AllpassSection]) -> (Vec<f64>, Vec<f64>) {
    sections.iter().map(|s| (s.rho(), s.theta())).unzip()
}

fn interleave(gr: &[f64], gt: &[f64]) -> Vec<f64> {
    gr.iter().zip(gt).flat_map(|(a, b)| [*a, *b]).collect()
}

/// Weighted group-delay MSE. The gradient is ordered `[∂ρ₁, ∂θ₁, ∂ρ₂, ∂θ₂, …]`.
///
/// The section count is taken from `sections`, so trial cascades of any
/// length may be scored against the band target.
pub fn gd_cost(
    sections: &[AllpassSection],
    spec: &SubbandSpec,
    weighting: &WeightingSpec,
    grid: &FrequencyGrid,
) -> Result<(f64, Vec<f64>)> {
    let spec = SubbandSpec {
        n_sections: sections.len(),
        ..*spec
    };
    let problem = BandProblem::new(&spec, weighting, grid)?;
    let (rho, theta) = split(sections);
    let mut gr = vec![0.0; rho.len()];
    let mut gt = vec![0.0; rho.len()];
    let c = problem.gd_cost_raw(&rho, &theta, &mut gr, &mut gt);
    Ok((c, interleave(&gr, &gt)))
}

/// Weighted phase-transfer MSE; gradient ordered `[∂ρ₁, ∂θ₁, …, ∂φ₀]`.
pub fn phase_cost(
    sections: &[AllpassSection],
    phi0: f64,
    spec: &SubbandSpec,
    weighting: &WeightingSpec,
    grid: &FrequencyGrid,
) -> Result<(f64, Vec<f64>)> {
    let spec = SubbandSpec {
        n_sections: sections.len(),
        ..*spec
    };
    let problem = BandProblem::new(&spec, weighting, grid)?;
    let (rho, theta) = split(sections);
    let mut gr = vec![0.0; rho.len()];
    let mut gt = vec![0.0; rho.len()];
    let (c, gphi) = problem.phase_cost_raw(&rho, &theta, phi0, &mut gr, &mut gt);
    let mut g = interleave(&gr, &gt);
    g.push(gphi);
    Ok((c, g))
}

/// `φ₀ = −arg ∫ W·G·H·e^{jβ'(ω' − k'π)} dω'`.
pub fn optimal_phi0(
    sections: &[AllpassSection],
    spec: &SubbandSpec,
    weighting: &WeightingSpec,
    grid: &FrequencyGrid,
) -> Result<f64> {
    let spec = SubbandSpec {
        n_sections: sections.len(),
        ..*spec
    };
    let problem = BandProblem::new(&spec, weighting, grid)?;
    let (rho, theta) = split(sections);
    problem.optimal_phi0_raw(&rho, &theta)
}
