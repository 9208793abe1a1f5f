//! Transmit pulse shaping and receive matched filtering at two samples per symbol.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::filterbank::rrc_sample;

pub const SAMPLES_PER_SYMBOL: usize = 2;
pub const PULSE_SPAN_SYMBOLS: usize = 32;

/// Unit-energy RRC pulse with symbol period 2 samples spanning 32 symbols (65 taps).
pub fn rrc_pulse(roll_off: f64) -> Result<Vec<f64>> {
    if !(roll_off > 0.0 && roll_off <= 1.0) {
        return Err(invalid(format!(
            "pulse roll-off must lie in (0, 1], got {roll_off}"
        )));
    }
    let half = (PULSE_SPAN_SYMBOLS * SAMPLES_PER_SYMBOL / 2) as i64;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|t| rrc_sample(t as f64, SAMPLES_PER_SYMBOL as f64, roll_off))
        .collect();
    let e = taps.iter().map(|v| v * v).sum::<f64>().sqrt();
    taps.iter_mut().for_each(|v| *v /= e);
    Ok(taps)
}

/// Group delay of [`rrc_pulse`] in samples.
pub fn pulse_delay() -> usize {
    PULSE_SPAN_SYMBOLS * SAMPLES_PER_SYMBOL / 2
}

/// Full linear convolution with a real FIR.
pub fn convolve(x: &[Complex64], taps: &[f64]) -> Vec<Complex64> {
    if x.is_empty() || taps.is_empty() {
        return Vec::new();
    }
    let mut y = vec![Complex64::new(0.0, 0.0); x.len() + taps.len() - 1];
    for (i, &xi) in x.iter().enumerate() {
        if xi.re == 0.0 && xi.im == 0.0 {
            continue;
        }
        for (yj, &h) in y[i..i + taps.len()].iter_mut().zip(taps) {
            *yj += xi * h;
        }
    }
    y
}

/// Zero-stuffs to two samples per symbol and filters with the unit-energy RRC.
///
/// Output length is `2·n + 64`; symbol `i` peaks at sample `2i + 32`.
pub fn shape_and_upsample(symbols: &[Complex64], roll_off_tx: f64) -> Result<Vec<Complex64>> {
    let taps = rrc_pulse(roll_off_tx)?;
    let mut up = vec![Complex64::new(0.0, 0.0); symbols.len() * SAMPLES_PER_SYMBOL];
    for (i, s) in symbols.iter().enumerate() {
        up[i * SAMPLES_PER_SYMBOL] = *s;
    }
    Ok(convolve(&up, &taps))
}

/// Receive matched filter (same RRC as the transmitter).
pub fn matched_filter(samples: &[Complex64], roll_off: f64) -> Result<Vec<Complex64>> {
    Ok(convolve(samples, &rrc_pulse(roll_off)?))
}
