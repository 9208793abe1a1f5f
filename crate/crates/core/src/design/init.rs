//! Area-based pole placement (Abel-Smith initialization).
//!
//! Each first-order section contributes 2π of group-delay area, so the
//! cumulative integral of the target is cut into 2π slices: slice edges
//! bound the sections, the half-way points give the pole angles and the
//! mean target delay over a slice sets the radius through the peak delay
//! `(1 + ρ)/(1 − ρ)` of a section.

use std::f64::consts::{PI, TAU};

use super::target::{desired_group_delay, SubbandSpec};
use super::weighting::FrequencyGrid;
use crate::allpass::{AllpassSection, RHO_MAX};
use crate::error::{invalid, Error, Result};

/// Cumulative trapezoid integral of the clipped target on the closed grid `[−π, π]`.
fn cumulative_area(spec: &SubbandSpec, grid: &FrequencyGrid) -> (Vec<f64>, Vec<f64>) {
    let n = grid.len();
    let omegas: Vec<f64> = (0..=n)
        .map(|i| if i == n { PI } else { grid.omega(i) })
        .collect();
    let tau: Vec<f64> = omegas
        .iter()
        .map(|&w| desired_group_delay(spec, w).max(0.0))
        .collect();
    let mut area = Vec::with_capacity(n + 1);
    area.push(0.0);
    for i in 1..=n {
        let a = area[i - 1] + 0.5 * (tau[i - 1] + tau[i]) * (omegas[i] - omegas[i - 1]);
        area.push(a);
    }
    (omegas, area)
}

/// Frequency where the cumulative area reaches `level`, by linear interpolation; clamps to `π`.
fn invert(omegas: &[f64], area: &[f64], level: f64) -> f64 {
    let last = *area.last().unwrap();
    if level >= last {
        return PI;
    }
    if level <= 0.0 {
        return -PI;
    }
    let idx = area.partition_point(|&a| a < level);
    let (a0, a1) = (area[idx - 1], area[idx]);
    let (w0, w1) = (omegas[idx - 1], omegas[idx]);
    if a1 == a0 {
        w0
    } else {
        w0 + (level - a0) / (a1 - a0) * (w1 - w0)
    }
}

/// Places `spec.n_sections` stable sections on the band's delay target.
///
/// Negative target values (the edge band `k' = M/2` dips below zero near
/// `ω' = π`) are clipped to zero before integration; a target that is
/// nowhere positive is infeasible.
pub fn abel_smith_init(spec: &SubbandSpec, grid: &FrequencyGrid) -> Result<Vec<AllpassSection>> {
    let n = spec.n_sections;
    if n == 0 {
        return Err(invalid(
            "Abel-Smith initialization needs at least one section",
        ));
    }
    let (omegas, area) = cumulative_area(spec, grid);
    let total = *area.last().unwrap();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::InfeasibleTarget(format!(
            "band {} has no positive group-delay area",
            spec.k
        )));
    }
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(-PI);
    for i in 1..=n {
        edges.push(invert(&omegas, &area, TAU * i as f64));
    }
    let area_at = |w: f64| -> f64 {
        let idx = omegas
            .partition_point(|&o| o < w)
            .clamp(1, omegas.len() - 1);
        let (w0, w1) = (omegas[idx - 1], omegas[idx]);
        let t = ((w - w0) / (w1 - w0)).clamp(0.0, 1.0);
        area[idx - 1] + t * (area[idx] - area[idx - 1])
    };
    (1..=n)
        .map(|i| {
            let theta = invert(&omegas, &area, TAU * (i as f64 - 0.5));
            let (lo, hi) = (edges[i - 1], edges[i]);
            let mean = if hi > lo {
                (area_at(hi) - area_at(lo)) / (hi - lo)
            } else {
                desired_group_delay(spec, lo).max(0.0)
            };
            let rho = ((mean - 1.0) / (mean + 1.0)).clamp(0.0, RHO_MAX);
            AllpassSection::new(rho, theta)
        })
        .collect()
}
