//! Additive white circular Gaussian noise.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Per-sample complex noise variance for a given Es/N0 (dB), assuming
/// unit-energy symbols and unit-energy shaping/matched filters.
pub fn noise_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// Adds noise of total variance `10^(−snr_db/10)` per complex sample.
///
/// `snr_db = +∞` leaves the samples untouched.
pub fn add_awgn<R: Rng + ?Sized>(samples: &mut [Complex64], snr_db: f64, rng: &mut R) {
    let var = noise_variance(snr_db);
    if var == 0.0 {
        return;
    }
    let sd = (var / 2.0).sqrt();
    for v in samples.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v += Complex64::new(re * sd, im * sd);
    }
}
