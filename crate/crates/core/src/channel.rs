//! Discrete-time chromatic-dispersion channel.
//!
//! Sampled at `B` samples/s, a fiber of length `L` acts as the all-pass
//! filter `H(ω) = exp(-j·α·ω²)` with `α = λ₀²·B²·D·L / (4πc)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::util::{fft_in_place, ifft_in_place, wrap_angle};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Conversion factor from ps/(nm·km) to s/m².
pub const PS_PER_NM_KM: f64 = 1e-6;

/// Physical link parameters, stored in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Carrier wavelength (m).
    pub lambda0: f64,
    /// Dispersion parameter (s/m²).
    pub dispersion: f64,
    /// Fiber length (m).
    pub length: f64,
    /// Sampling rate (samples/s).
    pub sample_rate: f64,
    /// Derived dispersion coefficient (rad).
    pub alpha: f64,
}

impl ChannelParams {
    /// Builds the parameter set; `dispersion_ps_nm_km` is in the customary ps/nm/km.
    pub fn new(
        lambda0: f64,
        dispersion_ps_nm_km: f64,
        length: f64,
        sample_rate: f64,
    ) -> Result<Self> {
        let alpha = compute_alpha(lambda0, dispersion_ps_nm_km, length, sample_rate)?;
        Ok(Self {
            lambda0,
            dispersion: dispersion_ps_nm_km * PS_PER_NM_KM,
            length,
            sample_rate,
            alpha,
        })
    }
}

/// Dispersion coefficient `α = λ₀²·B²·D·L / (4πc)` with `D` given in ps/nm/km.
pub fn compute_alpha(
    lambda0: f64,
    dispersion_ps_nm_km: f64,
    length: f64,
    sample_rate: f64,
) -> Result<f64> {
    let named = [
        ("lambda0", lambda0),
        ("dispersion", dispersion_ps_nm_km),
        ("length", length),
        ("sample_rate", sample_rate),
    ];
    for (name, v) in named {
        if !v.is_finite() || v < 0.0 {
            return Err(invalid(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    if sample_rate == 0.0 {
        return Err(invalid("sample_rate must be positive"));
    }
    let d = dispersion_ps_nm_km * PS_PER_NM_KM;
    Ok(lambda0 * lambda0 * sample_rate * sample_rate * d * length / (4.0 * PI * SPEED_OF_LIGHT))
}

/// Full-band channel response `exp(-j·α·ω²)`.
pub fn cd_response(alpha: f64, omega: f64) -> Complex64 {
    Complex64::from_polar(1.0, -alpha * omega * omega)
}

/// Channel response seen by sub-band `k'` after decimation by `M/2`:
/// `exp(-j·α'·(ω' + k'·π)²)` with `α' = α·(2/M)²`.
pub fn subband_cd_response(alpha_prime: f64, k_prime: i64, omega_prime: f64) -> Complex64 {
    let w = omega_prime + k_prime as f64 * PI;
    Complex64::from_polar(1.0, -alpha_prime * w * w)
}

/// Applies the channel to a finite record with one length-N transform.
///
/// Bin `n` is evaluated at `2πn/N` wrapped to `[-π, π)`, so the channel acts
/// circularly on the record. Pad with zeros if a linear channel is wanted.
pub fn apply_cd(signal: &[Complex64], alpha: f64) -> Result<Vec<Complex64>> {
    if signal.is_empty() {
        return Err(invalid("apply_cd needs a non-empty signal"));
    }
    if !alpha.is_finite() {
        return Err(invalid("alpha must be finite"));
    }
    if alpha == 0.0 {
        return Ok(signal.to_vec());
    }
    let n = signal.len();
    let mut buf = signal.to_vec();
    fft_in_place(&mut buf);
    for (i, v) in buf.iter_mut().enumerate() {
        let w = wrap_angle(TAU * i as f64 / n as f64);
        *v *= cd_response(alpha, w);
    }
    ifft_in_place(&mut buf);
    Ok(buf)
}
