//! Small numerical helpers shared across modules.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{contract, Result};

/// Wraps an angle to `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    // rem_euclid can return TAU for tiny negative inputs
    if y >= PI {
        y - TAU
    } else {
        y
    }
}

/// In-place unnormalized forward DFT (`exp(-j2πnk/N)` kernel).
pub fn fft_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

/// In-place inverse DFT (`exp(+j2πnk/N)` kernel), scaled by `1/N`.
pub fn ifft_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let n = buf.len() as f64;
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(buf.len()).process(buf);
    for v in buf.iter_mut() {
        *v /= n;
    }
}

/// Continues a sampled phase curve across `±π` jumps.
///
/// Adjacent samples must differ by less than π in true phase, which the
/// caller guarantees by sampling densely enough. A jump that leaves a
/// residual step of exactly ±π cannot be resolved and is reported.
pub fn unwrap_phase(phase: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(phase.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &p in phase {
        if let Some(last) = prev {
            let step = p + offset - last;
            let k = (step / TAU).round();
            offset -= k * TAU;
            let fixed = p + offset - last;
            if fixed.abs() >= PI * (1.0 - 1e-9) {
                return Err(contract("phase grid too coarse to unwrap"));
            }
        }
        let v = p + offset;
        out.push(v);
        prev = Some(v);
    }
    Ok(out)
}

/// Normalized mean-squared error `‖a − b‖² / ‖b‖²`.
pub fn nmse(a: &[Complex64], reference: &[Complex64]) -> f64 {
    let err: f64 = a
        .iter()
        .zip(reference)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    let pow: f64 = reference.iter().map(|y| y.norm_sqr()).sum();
    err / pow
}

pub fn energy(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

/// Gaussian tail probability `Q(x) = ½·erfc(x/√2)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}
