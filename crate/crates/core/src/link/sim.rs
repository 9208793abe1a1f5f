//! Monte-Carlo QPSK link: transmitter, fiber, noise, equalizer, receiver.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EqualizerMode, LinkConfig};
use super::noise::add_awgn;
use super::pulse::{matched_filter, pulse_delay, shape_and_upsample, SAMPLES_PER_SYMBOL};
use super::qpsk::{qpsk_demodulate, qpsk_modulate};
use super::sync::synchronize;
use crate::channel::apply_cd;
use crate::design::{
    design_all_bands, design_fullband, DesignLayout, EqualizerDesign, FrequencyGrid,
};
use crate::equalizer::{Equalizer, FullbandEqualizer, Passthrough, SubbandEqualizer};
use crate::error::{contract, Error, Result};
use crate::filterbank::design_rrc;
use crate::util::q_function;

/// Zero samples placed before the burst; must exceed the CD spread towards negative time.
const HEAD_GUARD: usize = 1024;
/// Zero samples after the burst beyond the equalizer latency.
const TAIL_GUARD: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
}

/// Gray-QPSK bit error rate `Q(√(Es/N0))`.
pub fn theory_ber(snr_db: f64) -> f64 {
    q_function(10f64.powf(snr_db / 20.0))
}

/// SNR where a BER curve crosses `target`, by linear interpolation of `log10(BER)`.
///
/// Points are taken in ascending SNR order; the first downward crossing is used.
pub fn snr_at_ber(points: &[BerPoint], target: f64) -> Option<f64> {
    let mut sorted: Vec<&BerPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    for w in sorted.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.ber >= target && b.ber <= target && b.ber > 0.0 {
            let (la, lb, lt) = (a.ber.log10(), b.ber.log10(), target.log10());
            if la == lb {
                return Some(a.snr_db);
            }
            return Some(a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db));
        }
    }
    None
}

/// Designs whatever the configured equalizer mode needs.
pub fn design_for(config: &LinkConfig) -> Result<Option<EqualizerDesign>> {
    config.validate()?;
    let alpha = config.channel()?.alpha;
    let settings = config.optimizer();
    match config.equalizer {
        EqualizerMode::None => Ok(None),
        EqualizerMode::FullbandIir => design_fullband(
            alpha,
            &config.fullband_weighting()?,
            &FrequencyGrid::new(config.fullband_grid_points)?,
            &settings,
        )
        .map(Some),
        EqualizerMode::FbIir => design_all_bands(
            alpha,
            &config.filter_bank()?,
            &config.weighting()?,
            &FrequencyGrid::new(config.grid_points)?,
            &settings,
        )
        .map(Some),
    }
}

fn need(design: Option<&EqualizerDesign>) -> Result<&EqualizerDesign> {
    design.ok_or_else(|| contract("equalizer mode requires a design"))
}

/// Builds a fresh runtime equalizer.
pub fn build_equalizer(
    config: &LinkConfig,
    design: Option<&EqualizerDesign>,
) -> Result<Box<dyn Equalizer>> {
    match config.equalizer {
        EqualizerMode::None => Ok(Box::new(Passthrough)),
        EqualizerMode::FullbandIir => Ok(Box::new(FullbandEqualizer::new(need(design)?)?)),
        EqualizerMode::FbIir => {
            let d = need(design)?;
            if d.layout
                != (DesignLayout::Subband {
                    bands: config.bands,
                })
            {
                return Err(contract(
                    "design layout does not match the configured filter bank",
                ));
            }
            let proto = design_rrc(
                config.bands,
                config.length_factor,
                config.prototype_roll_off,
            )?;
            Ok(Box::new(SubbandEqualizer::new(d, &proto)?))
        }
    }
}

struct Burst {
    bits: Vec<u8>,
    pilots: Vec<Complex64>,
    /// Dispersed transmit samples, guards included.
    rx_clean: Vec<Complex64>,
}

fn transmit(config: &LinkConfig, alpha: f64, tail: usize) -> Result<Burst> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(0);
    let bits: Vec<u8> = (0..2 * config.n_symbols)
        .map(|_| rng.gen::<bool>() as u8)
        .collect();
    let symbols = qpsk_modulate(&bits)?;
    let pilots = symbols[..config.n_pilots].to_vec();
    let shaped = shape_and_upsample(&symbols, config.tx_roll_off)?;
    let mut tx = vec![Complex64::new(0.0, 0.0); HEAD_GUARD];
    tx.extend(shaped);
    tx.resize(tx.len() + tail, Complex64::new(0.0, 0.0));
    // round up so every block size downstream divides the record
    tx.resize(tx.len().div_ceil(256) * 256, Complex64::new(0.0, 0.0));
    let rx_clean = apply_cd(&tx, alpha)?;
    Ok(Burst {
        bits,
        pilots,
        rx_clean,
    })
}

/// Equalized, synchronized symbol stream for one noise realization.
fn receive_symbols(
    config: &LinkConfig,
    design: Option<&EqualizerDesign>,
    burst: &Burst,
    snr_db: f64,
    stream: u64,
) -> Result<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let mut samples = burst.rx_clean.clone();
    add_awgn(&mut samples, snr_db, &mut rng);

    let mut eq = build_equalizer(config, design)?;
    let nominal = HEAD_GUARD + eq.latency() + 2 * pulse_delay();
    let equalized = eq.process(&samples)?;
    let filtered = matched_filter(&equalized, config.tx_roll_off)?;

    // pick the sampling phase with the stronger pilot correlation
    let mut best: Option<super::sync::SyncResult> = None;
    let mut last_err = None;
    for phase in 0..SAMPLES_PER_SYMBOL {
        let sym: Vec<Complex64> = filtered[phase..]
            .iter()
            .step_by(SAMPLES_PER_SYMBOL)
            .copied()
            .collect();
        match synchronize(&sym, &burst.pilots) {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.peak > b.peak) {
                    best = Some(r);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let aligned = match best {
        Some(r) => r.aligned,
        // An unequalized dispersed link has no usable pilot peak; decide at the
        // nominal instant so the BER still reports how bad it is.
        None if config.equalizer == EqualizerMode::None => {
            nominal_alignment(&filtered, nominal, &burst.pilots)
        }
        None => return Err(last_err.unwrap_or(Error::SyncFailure { peak: 0.0 })),
    };
    if aligned.len() < config.n_symbols {
        return Err(contract(
            "received stream ends before the last payload symbol",
        ));
    }
    Ok(aligned)
}

fn receive_point(
    config: &LinkConfig,
    design: Option<&EqualizerDesign>,
    burst: &Burst,
    snr_db: f64,
    stream: u64,
) -> Result<BerPoint> {
    let aligned = receive_symbols(config, design, burst, snr_db, stream)?;
    let decided = qpsk_demodulate(&aligned[config.n_pilots..config.n_symbols]);
    let sent = &burst.bits[2 * config.n_pilots..];
    let errors = decided.iter().zip(sent).filter(|(a, b)| a != b).count() as u64;
    let bits = sent.len() as u64;
    Ok(BerPoint {
        snr_db,
        bits,
        errors,
        ber: errors as f64 / bits as f64,
    })
}

/// Noise-free signal-to-distortion ratio (dB) of the payload symbols after
/// equalization, matched filtering and synchronization.
pub fn residual_sdr_db(config: &LinkConfig, design: Option<&EqualizerDesign>) -> Result<f64> {
    config.validate()?;
    let alpha = config.channel()?.alpha;
    let latency = build_equalizer(config, design)?.latency();
    let burst = transmit(config, alpha, latency + TAIL_GUARD)?;
    let aligned = receive_symbols(config, design, &burst, f64::INFINITY, 0)?;
    let sent = qpsk_modulate(&burst.bits)?;
    let range = config.n_pilots..config.n_symbols;
    let err: f64 = aligned[range.clone()]
        .iter()
        .zip(&sent[range.clone()])
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok(10.0 * (range.len() as f64 / err).log10())
}

fn nominal_alignment(filtered: &[Complex64], start: usize, pilots: &[Complex64]) -> Vec<Complex64> {
    let sym: Vec<Complex64> = filtered[start.min(filtered.len())..]
        .iter()
        .step_by(SAMPLES_PER_SYMBOL)
        .copied()
        .collect();
    let phase = sym
        .iter()
        .zip(pilots)
        .map(|(r, p)| r * p.conj())
        .sum::<Complex64>()
        .arg();
    let rot = Complex64::from_polar(1.0, -phase);
    sym.iter().map(|v| v * rot).collect()
}

/// Runs every SNR point of `config`. SNR point `i` draws its noise from
/// random stream `i + 1`, so results do not depend on scheduling.
pub fn run_link(config: &LinkConfig, design: Option<&EqualizerDesign>) -> Result<Vec<BerPoint>> {
    config.validate_for_ber()?;
    let alpha = config.channel()?.alpha;
    let latency = build_equalizer(config, design)?.latency();
    let burst = transmit(config, alpha, latency + TAIL_GUARD)?;
    config
        .snr_db
        .par_iter()
        .enumerate()
        .map(|(i, &snr)| receive_point(config, design, &burst, snr, i as u64 + 1))
        .collect()
}
