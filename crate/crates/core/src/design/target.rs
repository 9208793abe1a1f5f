//! Per-band group-delay and phase targets.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Constants describing the equalization target of one sub-band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubbandSpec {
    /// Band index in DFT order, `0..M`.
    pub k: usize,
    /// Signed band index: `k` for `k ≤ M/2`, `k − M` above.
    pub k_prime: i64,
    /// Sub-band dispersion coefficient `α·(2/M)²`.
    pub alpha_prime: f64,
    /// Delay offset `⌈2·α'·(M/2)·π⌉` that keeps the target non-negative at the band centre.
    pub beta_prime: i64,
    /// Number of first-order sections, `⌈β' − 2π·α'·k'⌉` floored at zero.
    pub n_sections: usize,
}

/// Ceiling that ignores floating-point noise just above an integer.
fn robust_ceil(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r
    } else {
        v.ceil()
    }
}

/// Builds the target constants for band `k` of an `M`-band bank.
pub fn subband_spec(alpha: f64, m: usize, k: usize) -> Result<SubbandSpec> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(invalid(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    if m < 2 || !m.is_multiple_of(2) {
        return Err(invalid(format!("number of bands must be even, got {m}")));
    }
    if k >= m {
        return Err(invalid(format!(
            "band index {k} out of range for {m} bands"
        )));
    }
    let k_prime = if k <= m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    };
    let alpha_prime = alpha * (2.0 / m as f64).powi(2);
    let beta_prime = robust_ceil(2.0 * alpha_prime * (m / 2) as f64 * PI) as i64;
    let n = robust_ceil(beta_prime as f64 - 2.0 * PI * alpha_prime * k_prime as f64).max(0.0);
    Ok(SubbandSpec {
        k,
        k_prime,
        alpha_prime,
        beta_prime,
        n_sections: n as usize,
    })
}

/// Full-band baseline: the `M = 2` framing with `k' = 0`, giving
/// `β = ⌈2απ⌉` and `N_IIR = ⌈2πα⌉`.
pub fn fullband_spec(alpha: f64) -> Result<SubbandSpec> {
    subband_spec(alpha, 2, 0)
}

/// Desired group delay `−2α'(ω' + k'π) + β'` in sub-band samples.
pub fn desired_group_delay(spec: &SubbandSpec, omega_prime: f64) -> f64 {
    -2.0 * spec.alpha_prime * (omega_prime + spec.k_prime as f64 * PI) + spec.beta_prime as f64
}

/// Desired phase `α'(ω' + k'π)² − β'(ω' + k'π) + φ₀`.
pub fn desired_phase(spec: &SubbandSpec, omega_prime: f64, phi0: f64) -> f64 {
    let w = omega_prime + spec.k_prime as f64 * PI;
    spec.alpha_prime * w * w - spec.beta_prime as f64 * w + phi0
}
