//! Pilot-aided timing and phase recovery.

use num_complex::Complex64;

use crate::error::{contract, Error, Result};
use crate::util::{fft_in_place, ifft_in_place};

#[derive(Debug, Clone, PartialEq)]
pub struct SyncResult {
    /// Symbol index in the received stream where the pilot block starts.
    pub delay: usize,
    /// Common phase rotation (rad) estimated on the pilots.
    pub phase: f64,
    /// Normalized correlation peak in `[0, 1]`.
    pub peak: f64,
    /// Received stream from `delay` on, de-rotated by `phase`.
    pub aligned: Vec<Complex64>,
}

/// `corr[d] = Σᵢ rx[d + i]·conj(pilots[i])` for every `d` with a full overlap, via FFT.
fn cross_correlate(rx: &[Complex64], pilots: &[Complex64]) -> Vec<Complex64> {
    let n = (rx.len() + pilots.len()).next_power_of_two();
    let mut a = rx.to_vec();
    a.resize(n, Complex64::new(0.0, 0.0));
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    // conj(p) reversed, so linear convolution yields correlation
    for (i, p) in pilots.iter().enumerate() {
        b[pilots.len() - 1 - i] = p.conj();
    }
    fft_in_place(&mut a);
    fft_in_place(&mut b);
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
    ifft_in_place(&mut a);
    let valid = rx.len() - pilots.len() + 1;
    a[pilots.len() - 1..pilots.len() - 1 + valid].to_vec()
}

/// Locates the pilot block by correlation and removes the common phase.
///
/// The normalized peak is `|corr| / √(Σ|pilot|²·Σ|rx window|²)`; below 0.5
/// the stream is considered unsynchronizable.
pub fn synchronize(rx: &[Complex64], pilots: &[Complex64]) -> Result<SyncResult> {
    if pilots.is_empty() || rx.len() < pilots.len() {
        return Err(contract("received stream shorter than the pilot block"));
    }
    let corr = cross_correlate(rx, pilots);
    let p_energy: f64 = pilots.iter().map(|p| p.norm_sqr()).sum();
    let mut prefix = Vec::with_capacity(rx.len() + 1);
    prefix.push(0.0);
    for v in rx {
        prefix.push(prefix.last().unwrap() + v.norm_sqr());
    }
    let mut best = (0usize, 0.0f64);
    for (d, c) in corr.iter().enumerate() {
        let w = (prefix[d + pilots.len()] - prefix[d]).max(0.0);
        if w <= 0.0 {
            continue;
        }
        let score = c.norm() / (p_energy * w).sqrt();
        if score > best.1 {
            best = (d, score);
        }
    }
    let (delay, peak) = best;
    if peak < 0.5 {
        return Err(Error::SyncFailure { peak });
    }
    // least-squares phase on the pilot block
    let phase = rx[delay..delay + pilots.len()]
        .iter()
        .zip(pilots)
        .map(|(r, p)| r * p.conj())
        .sum::<Complex64>()
        .arg();
    let rot = Complex64::from_polar(1.0, -phase);
    let aligned = rx[delay..].iter().map(|v| v * rot).collect();
    Ok(SyncResult {
        delay,
        phase,
        peak: peak.min(1.0),
        aligned,
    })
}
