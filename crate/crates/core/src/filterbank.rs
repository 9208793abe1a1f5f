//! Nonmaximally decimated (2x oversampled) DFT filter bank.
//!
//! `M` bands centred at `ω_k = 2πk/M` (DFT ordering), decimated by `M/2`,
//! with a root-raised-cosine prototype of `K·M` taps and cutoff `π/M`.
//!
//! Conventions (frame `m` closes at input time `t_m = m·M/2 + M/2 − 1`):
//!
//! * analysis: `y_k[m] = Σ_i g[i]·x[t_m − i]·e^{−jω_k(t_m − i)}`, i.e. band
//!   `k` is shifted to zero frequency, low-pass filtered and sampled at `t_m`.
//!   In polyphase form the window is folded onto `M` lanes, transformed with
//!   a positive-exponent length-`M` DFT and rotated by `e^{−jω_k·(t_m mod M)}`.
//! * synthesis: `x̂[n] = Σ_m Σ_k ŷ_k[m]·g[n − t_m]·e^{jω_k(n − (L−1))}` with
//!   `L = K·M`, emitted `M/2` samples per frame.
//!
//! Remodulating at `n − (L−1)` makes the analysis/synthesis pair a near
//! delay of `L − M/2` output samples; the rotation per frame is the
//! odd-frame correction required because the hop `M/2` is not a multiple of `M`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{contract, invalid, Result};

/// Ratio of summed sub-band orders to the full-band order under 2x oversampling.
pub const KAPPA: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterBankConfig {
    m: usize,
    k: usize,
}

impl FilterBankConfig {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m < 2 || !m.is_multiple_of(2) {
            return Err(invalid(format!(
                "number of bands must be even and >= 2, got {m}"
            )));
        }
        if k == 0 {
            return Err(invalid("prototype length factor K must be >= 1"));
        }
        Ok(Self { m, k })
    }

    /// Number of sub-bands `M`.
    pub fn bands(&self) -> usize {
        self.m
    }

    /// Prototype length factor `K`.
    pub fn length_factor(&self) -> usize {
        self.k
    }

    pub fn decimation(&self) -> usize {
        self.m / 2
    }

    pub fn kappa(&self) -> usize {
        KAPPA
    }

    /// Prototype length `K·M`.
    pub fn prototype_len(&self) -> usize {
        self.k * self.m
    }
}

/// Real, even-symmetric RRC prototype.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeFilter {
    pub coeffs: Vec<f64>,
    pub roll_off: f64,
    pub config: FilterBankConfig,
}

/// One output vector of the analysis bank: one sample per band.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandFrame {
    pub index: usize,
    pub values: Vec<Complex64>,
}

/// Root-raised-cosine impulse response at time `t` (samples) for symbol
/// period `period` samples, unnormalized (peak `1 + β(4/π − 1)` at `t = 0`).
pub fn rrc_sample(t: f64, period: f64, beta: f64) -> f64 {
    let x = t / period;
    if x.abs() < 1e-12 {
        return 1.0 + beta * (4.0 / PI - 1.0);
    }
    if beta > 0.0 && ((4.0 * beta * x).abs() - 1.0).abs() < 1e-9 {
        let a = PI / (4.0 * beta);
        return beta / std::f64::consts::SQRT_2
            * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let num = (PI * x * (1.0 - beta)).sin() + 4.0 * beta * x * (PI * x * (1.0 + beta)).cos();
    let den = PI * x * (1.0 - (4.0 * beta * x).powi(2));
    num / den
}

/// Designs the bank prototype: `K·M` RRC taps with symbol period `M`
/// (cutoff `π/M`), centred at `(KM − 1)/2`, plain truncation, scaled so the
/// analysis→synthesis cascade has unit gain.
///
/// The gain is measured by pushing a unit impulse through the cascade at
/// each of the `M/2` input phases and averaging the main tap, which equals
/// the expected gain seen by a white input.
pub fn design_rrc(m: usize, k: usize, roll_off: f64) -> Result<PrototypeFilter> {
    let config = FilterBankConfig::new(m, k)?;
    if !(roll_off > 0.0 && roll_off <= 1.0) {
        return Err(invalid(format!(
            "roll-off must lie in (0, 1], got {roll_off}"
        )));
    }
    let len = config.prototype_len();
    let centre = (len as f64 - 1.0) / 2.0;
    let mut coeffs: Vec<f64> = (0..len)
        .map(|i| rrc_sample(i as f64 - centre, m as f64, roll_off))
        .collect();
    // Symmetrize explicitly so mirrored taps are bit-identical.
    for i in 0..len / 2 {
        let v = 0.5 * (coeffs[i] + coeffs[len - 1 - i]);
        coeffs[i] = v;
        coeffs[len - 1 - i] = v;
    }
    let e: f64 = coeffs.iter().map(|c| c * c).sum();
    let s = (0.5 / e).sqrt();
    coeffs.iter_mut().for_each(|c| *c *= s);

    let mut proto = PrototypeFilter {
        coeffs,
        roll_off,
        config,
    };
    let gain = impulse_averaged_gain(&proto)?;
    if !(gain.is_finite() && gain > 0.0) {
        return Err(invalid("prototype gives a degenerate cascade gain"));
    }
    let s = gain.sqrt().recip();
    proto.coeffs.iter_mut().for_each(|c| *c *= s);
    Ok(proto)
}

/// Mean main-tap gain of the identity-processing cascade over all input phases.
pub fn impulse_averaged_gain(p: &PrototypeFilter) -> Result<f64> {
    let cfg = p.config;
    let d = cfg.decimation();
    let delay = cfg.prototype_len() - d;
    let n = delay + cfg.prototype_len() + 2 * d;
    let n = n.div_ceil(d) * d + d;
    let mut total = 0.0;
    for phase in 0..d {
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[d + phase] = Complex64::new(1.0, 0.0);
        let y = synthesis(&cfg, p, &analysis(&cfg, p, &x)?)?;
        total += y[d + phase + delay].re;
    }
    Ok(total / d as f64)
}

/// Splits the prototype into its `M` polyphase components `g[k + mM]`.
pub fn polyphase_decompose(p: &PrototypeFilter) -> Vec<Vec<f64>> {
    let m = p.config.bands();
    (0..m)
        .map(|lane| p.coeffs.iter().skip(lane).step_by(m).copied().collect())
        .collect()
}

/// Re-interleaves polyphase components into the prototype sequence.
pub fn polyphase_interleave(components: &[Vec<f64>]) -> Vec<f64> {
    let m = components.len();
    let total: usize = components.iter().map(Vec::len).sum();
    (0..total).map(|i| components[i % m][i / m]).collect()
}

fn check_prototype(cfg: &FilterBankConfig, p: &PrototypeFilter) -> Result<()> {
    if *cfg != p.config || p.coeffs.len() != cfg.prototype_len() {
        return Err(contract(
            "prototype does not match the filter-bank configuration",
        ));
    }
    Ok(())
}

/// Twiddles `e^{s·j2πk·r/M}` for the two residues of `t_m mod M`.
fn frame_twiddles(m: usize, residues: [usize; 2], sign: f64) -> [Vec<Complex64>; 2] {
    residues.map(|r| {
        (0..m)
            .map(|k| Complex64::from_polar(1.0, sign * TAU * ((k * r) % m) as f64 / m as f64))
            .collect()
    })
}

/// Streaming polyphase analysis bank.
pub struct Analyzer {
    cfg: FilterBankConfig,
    lanes: Vec<Vec<f64>>,
    /// Last `L` input samples, oldest first.
    window: Vec<Complex64>,
    twiddle: [Vec<Complex64>; 2],
    fft: Arc<dyn Fft<f64>>,
    frame: usize,
}

impl Analyzer {
    pub fn new(p: &PrototypeFilter) -> Self {
        let cfg = p.config;
        let (m, d) = (cfg.bands(), cfg.decimation());
        let residues = [(d - 1) % m, (2 * d - 1) % m];
        Self {
            cfg,
            lanes: polyphase_decompose(p),
            window: vec![Complex64::new(0.0, 0.0); cfg.prototype_len()],
            twiddle: frame_twiddles(m, residues, -1.0),
            fft: FftPlanner::new().plan_fft_inverse(m),
            frame: 0,
        }
    }

    /// Consumes a block whose length is a multiple of `M/2`, returning one frame per `M/2` samples.
    pub fn process(&mut self, x: &[Complex64]) -> Result<Vec<SubbandFrame>> {
        let d = self.cfg.decimation();
        if !x.len().is_multiple_of(d) {
            return Err(contract(format!(
                "analysis input length {} is not a multiple of {d}",
                x.len()
            )));
        }
        let m = self.cfg.bands();
        let len = self.window.len();
        let mut frames = Vec::with_capacity(x.len() / d);
        let mut lane_buf = vec![Complex64::new(0.0, 0.0); m];
        for block in x.chunks_exact(d) {
            self.window.copy_within(d.., 0);
            self.window[len - d..].copy_from_slice(block);
            // lane r accumulates taps i ≡ r (mod M), i counted back from the newest sample
            for (r, lane) in self.lanes.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (p, &g) in lane.iter().enumerate() {
                    acc += self.window[len - 1 - r - p * m] * g;
                }
                lane_buf[r] = acc;
            }
            self.fft.process(&mut lane_buf);
            let tw = &self.twiddle[self.frame % 2];
            let values = lane_buf.iter().zip(tw).map(|(u, w)| u * w).collect();
            frames.push(SubbandFrame {
                index: self.frame,
                values,
            });
            self.frame += 1;
        }
        Ok(frames)
    }
}

/// Streaming polyphase synthesis bank.
pub struct Synthesizer {
    cfg: FilterBankConfig,
    coeffs: Vec<f64>,
    acc: Vec<Complex64>,
    twiddle: [Vec<Complex64>; 2],
    fft: Arc<dyn Fft<f64>>,
    frame: usize,
}

impl Synthesizer {
    pub fn new(p: &PrototypeFilter) -> Self {
        let cfg = p.config;
        let (m, d, len) = (cfg.bands(), cfg.decimation(), cfg.prototype_len());
        // remodulation reference t_m − (L − 1), reduced mod M
        let shift = (len - 1) % m;
        let residues = [((d - 1) + m - shift) % m, ((2 * d - 1) + m - shift) % m];
        Self {
            cfg,
            coeffs: p.coeffs.clone(),
            acc: vec![Complex64::new(0.0, 0.0); len],
            twiddle: frame_twiddles(m, residues, 1.0),
            fft: FftPlanner::new().plan_fft_inverse(m),
            frame: 0,
        }
    }

    /// Consumes frames and emits `M/2` output samples per frame.
    pub fn process(&mut self, frames: &[SubbandFrame]) -> Result<Vec<Complex64>> {
        let m = self.cfg.bands();
        let d = self.cfg.decimation();
        let len = self.acc.len();
        let mut out = Vec::with_capacity(frames.len() * d);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for f in frames {
            if f.values.len() != m {
                return Err(contract(format!(
                    "frame holds {} values, expected {m}",
                    f.values.len()
                )));
            }
            let tw = &self.twiddle[self.frame % 2];
            for ((b, v), w) in buf.iter_mut().zip(&f.values).zip(tw) {
                *b = v * w;
            }
            self.fft.process(&mut buf);
            for (j, (a, &g)) in self.acc.iter_mut().zip(&self.coeffs).enumerate() {
                *a += buf[j % m] * g;
            }
            out.extend_from_slice(&self.acc[..d]);
            self.acc.copy_within(d.., 0);
            self.acc[len - d..]
                .iter_mut()
                .for_each(|v| *v = Complex64::new(0.0, 0.0));
            self.frame += 1;
        }
        Ok(out)
    }
}

/// One-shot analysis of a record whose length is a multiple of `M/2`.
pub fn analysis(
    cfg: &FilterBankConfig,
    p: &PrototypeFilter,
    x: &[Complex64],
) -> Result<Vec<SubbandFrame>> {
    check_prototype(cfg, p)?;
    Analyzer::new(p).process(x)
}

/// One-shot synthesis; returns `M/2` samples per frame.
pub fn synthesis(
    cfg: &FilterBankConfig,
    p: &PrototypeFilter,
    frames: &[SubbandFrame],
) -> Result<Vec<Complex64>> {
    check_prototype(cfg, p)?;
    Synthesizer::new(p).process(frames)
}

/// Integer delay of analysis→synthesis with identity band processing,
/// found as the peak of the cascade's impulse response.
pub fn cascade_delay(cfg: &FilterBankConfig, p: &PrototypeFilter) -> Result<usize> {
    check_prototype(cfg, p)?;
    let d = cfg.decimation();
    let n = (3 * cfg.prototype_len()).div_ceil(d) * d;
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[0] = Complex64::new(1.0, 0.0);
    let y = synthesis(cfg, p, &analysis(cfg, p, &x)?)?;
    let (idx, _) = y.iter().enumerate().fold((0, -1.0), |best, (i, v)| {
        if v.norm() > best.1 {
            (i, v.norm())
        } else {
            best
        }
    });
    Ok(idx)
}

/// Deterministic white complex test signal.
pub fn white_signal(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Identity-processing reconstruction error in dB for a white random input.
pub fn reconstruction_nmse_db(p: &PrototypeFilter, n: usize, seed: u64) -> Result<f64> {
    let cfg = p.config;
    let d = cfg.decimation();
    let delay = cascade_delay(&cfg, p)?;
    let n = n.div_ceil(d) * d;
    let mut x = white_signal(n, seed);
    x.extend(std::iter::repeat_n(
        Complex64::new(0.0, 0.0),
        (delay + d).div_ceil(d) * d,
    ));
    let y = synthesis(&cfg, p, &analysis(&cfg, p, &x)?)?;
    Ok(10.0 * crate::util::nmse(&y[delay..delay + n], &x[..n]).log10())
}

/// Feeds the centre tone of band `k` and returns, in dB, how far the
/// strongest non-adjacent band lies below band `k` (steady-state frames only).
pub fn band_leakage_db(p: &PrototypeFilter, k: usize) -> Result<f64> {
    let cfg = p.config;
    let m = cfg.bands();
    if k >= m {
        return Err(invalid(format!("band {k} out of range for {m} bands")));
    }
    let d = cfg.decimation();
    let settle = cfg.prototype_len().div_ceil(d);
    let n = (settle + 64) * d;
    let wk = TAU * k as f64 / m as f64;
    let x: Vec<Complex64> = (0..n)
        .map(|t| Complex64::from_polar(1.0, wk * t as f64))
        .collect();
    let frames = analysis(&cfg, p, &x)?;
    let mut power = vec![0.0; m];
    for f in &frames[settle..] {
        for (pw, v) in power.iter_mut().zip(&f.values) {
            *pw += v.norm_sqr();
        }
    }
    let worst = (0..m)
        .filter(|&j| {
            let dist = (j + m - k) % m;
            dist > 1 && dist < m - 1
        })
        .map(|j| power[j])
        .fold(0.0, f64::max);
    Ok(10.0 * (power[k] / worst.max(f64::MIN_POSITIVE)).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::nmse;

    fn proto() -> PrototypeFilter {
        design_rrc(32, 8, 0.2).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(FilterBankConfig::new(31, 8).is_err());
        assert!(FilterBankConfig::new(0, 8).is_err());
        assert!(FilterBankConfig::new(32, 0).is_err());
        let c = FilterBankConfig::new(32, 8).unwrap();
        assert_eq!((c.decimation(), c.kappa(), c.prototype_len()), (16, 2, 256));
        assert!(design_rrc(32, 8, 0.0).is_err());
        assert!(design_rrc(32, 8, 1.5).is_err());
    }

    #[test]
    fn rrc_limits_are_continuous() {
        let (t, b) = (32.0, 0.2);
        let sing = t / (4.0 * b);
        let near = rrc_sample(sing + 1e-6, t, b);
        assert!((rrc_sample(sing, t, b) - near).abs() < 1e-6);
        assert!((rrc_sample(1e-7, t, b) - rrc_sample(0.0, t, b)).abs() < 1e-6);
    }

    #[test]
    fn prototype_symmetric_with_central_peak() {
        let p = proto();
        let n = p.coeffs.len();
        assert_eq!(n, 256);
        for i in 0..n {
            assert_eq!(p.coeffs[i], p.coeffs[n - 1 - i]);
        }
        let max = p.coeffs.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(p.coeffs[n / 2], max);
        assert!(p
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, &c)| i == n / 2 || i == n / 2 - 1 || c < max));
    }

    fn dtft_mag(p: &PrototypeFilter, w: f64) -> f64 {
        p.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| Complex64::from_polar(c, -w * i as f64))
            .sum::<Complex64>()
            .norm()
    }

    #[test]
    fn prototype_half_power_at_cutoff() {
        // a long prototype sits on the ideal RRC value
        let long = design_rrc(32, 64, 0.2).unwrap();
        let ratio = dtft_mag(&long, PI / 32.0) / dtft_mag(&long, 0.0);
        assert!(
            (ratio / std::f64::consts::FRAC_1_SQRT_2 - 1.0).abs() < 0.002,
            "ratio {ratio}"
        );
        // eight periods of a 0.2 roll-off pulse: truncation pulls the edge down by about 3%
        let p = proto();
        let ratio = dtft_mag(&p, PI / 32.0) / dtft_mag(&p, 0.0);
        assert!((ratio - 0.6858).abs() < 1e-3, "ratio {ratio}");
    }

    #[test]
    fn polyphase_round_trip() {
        let p = proto();
        let comps = polyphase_decompose(&p);
        assert_eq!(comps.iter().map(Vec::len).sum::<usize>(), 256);
        for (k, c) in comps.iter().enumerate() {
            for (m, &v) in c.iter().enumerate() {
                assert_eq!(v, p.coeffs[k + m * 32]);
            }
        }
        assert_eq!(polyphase_interleave(&comps), p.coeffs);
    }

    #[test]
    fn zero_in_zero_out_and_length_contracts() {
        let p = proto();
        let cfg = p.config;
        let frames = analysis(&cfg, &p, &vec![Complex64::new(0.0, 0.0); 64]).unwrap();
        assert_eq!(frames.len(), 4);
        assert!(frames
            .iter()
            .all(|f| f.values.iter().all(|v| v.norm() == 0.0)));
        let y = synthesis(&cfg, &p, &frames).unwrap();
        assert!(y.iter().all(|v| v.norm() == 0.0));
        assert!(analysis(&cfg, &p, &vec![Complex64::new(0.0, 0.0); 17]).is_err());
        let bad = SubbandFrame {
            index: 0,
            values: vec![Complex64::new(0.0, 0.0); 31],
        };
        assert!(synthesis(&cfg, &p, &[bad]).is_err());
        let other = design_rrc(16, 8, 0.2).unwrap();
        assert!(analysis(&cfg, &other, &[]).is_err());
    }

    #[test]
    fn impulse_gives_modulated_decimated_prototype() {
        let p = proto();
        let cfg = p.config;
        let n0 = 37;
        let mut x = vec![Complex64::new(0.0, 0.0); 16 * 40];
        x[n0] = Complex64::new(1.0, 0.0);
        let frames = analysis(&cfg, &p, &x).unwrap();
        for f in &frames {
            let t = (f.index * 16 + 15) as i64;
            for k in 0..32 {
                let i = t - n0 as i64;
                let g = if (0..256).contains(&i) {
                    p.coeffs[i as usize]
                } else {
                    0.0
                };
                let want = Complex64::from_polar(g, -TAU * k as f64 * n0 as f64 / 32.0);
                assert!(
                    (f.values[k] - want).norm() < 1e-10,
                    "frame {} band {k}",
                    f.index
                );
            }
        }
    }

    #[test]
    fn unit_gain_after_normalization() {
        let p = proto();
        assert!((impulse_averaged_gain(&p).unwrap() - 1.0).abs() < 1e-6);
    }

    /// Direct-form bank: demodulate, filter, decimate, upsample, filter, remodulate.
    fn direct_bank(p: &PrototypeFilter, x: &[Complex64]) -> Vec<Complex64> {
        let (m, d, l) = (
            p.config.bands(),
            p.config.decimation(),
            p.config.prototype_len(),
        );
        let n = x.len();
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..m {
            let wk = TAU * k as f64 / m as f64;
            let base: Vec<Complex64> = x
                .iter()
                .enumerate()
                .map(|(t, v)| v * Complex64::from_polar(1.0, -wk * t as f64))
                .collect();
            // filtered band sampled at the frame instants t ≡ d − 1 (mod d)
            let mut up = vec![Complex64::new(0.0, 0.0); n];
            for t in (d - 1..n).step_by(d) {
                up[t] = (0..l.min(t + 1)).map(|i| base[t - i] * p.coeffs[i]).sum();
            }
            for (t, yt) in y.iter_mut().enumerate() {
                let acc: Complex64 = (0..l.min(t + 1)).map(|i| up[t - i] * p.coeffs[i]).sum();
                *yt += acc * Complex64::from_polar(1.0, wk * (t as f64 - (l as f64 - 1.0)));
            }
        }
        y
    }

    #[test]
    fn polyphase_bank_matches_direct_form() {
        for (k, roll) in [(8, 0.2), (2, 0.9)] {
            let p = design_rrc(32, k, roll).unwrap();
            let x = white_signal(1024, 7);
            let fast = synthesis(&p.config, &p, &analysis(&p.config, &p, &x).unwrap()).unwrap();
            let slow = direct_bank(&p, &x);
            // synthesis output o belongs to time o + M/2 − 1 (first frame instant)
            let err = fast
                .iter()
                .zip(&slow[15..])
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "K={k}: {err}");
        }
    }

    #[test]
    fn delay_and_reconstruction() {
        let p = proto();
        let cfg = p.config;
        assert_eq!(cascade_delay(&cfg, &p).unwrap(), 240);
        // Truncating a 0.2 roll-off RRC to eight periods leaves a ripple in the
        // summed band responses near −28.4 dB; the direct-form model agrees.
        let db = reconstruction_nmse_db(&p, 1 << 14, 1).unwrap();
        assert!((db + 28.4).abs() < 0.3, "nmse {db} dB");
        let long = design_rrc(32, 16, 0.2).unwrap();
        let db = reconstruction_nmse_db(&long, 1 << 14, 1).unwrap();
        assert!(db <= -35.0, "nmse {db} dB");
    }

    #[test]
    fn short_wide_prototype_reconstructs() {
        let p = design_rrc(32, 2, 0.9).unwrap();
        let db = reconstruction_nmse_db(&p, 1 << 14, 2).unwrap();
        assert!((db + 26.0).abs() < 0.3, "nmse {db} dB");
        let p = design_rrc(32, 8, 0.9).unwrap();
        let db = reconstruction_nmse_db(&p, 1 << 14, 2).unwrap();
        assert!(db <= -40.0, "nmse {db} dB");
    }

    #[test]
    fn streaming_matches_one_shot() {
        let p = proto();
        let cfg = p.config;
        let x = white_signal(16 * 50, 4);
        let whole = analysis(&cfg, &p, &x).unwrap();
        let mut an = Analyzer::new(&p);
        let mut parts = an.process(&x[..16 * 7]).unwrap();
        parts.extend(an.process(&x[16 * 7..]).unwrap());
        assert_eq!(parts, whole);
        let y = synthesis(&cfg, &p, &whole).unwrap();
        let mut sy = Synthesizer::new(&p);
        let mut ys = sy.process(&whole[..13]).unwrap();
        ys.extend(sy.process(&whole[13..]).unwrap());
        assert_eq!(ys, y);
        assert!(nmse(&ys, &y) == 0.0);
    }
}
