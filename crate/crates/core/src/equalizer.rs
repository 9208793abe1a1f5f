//! Runtime equalizers built from a design.

use num_complex::Complex64;

use crate::allpass::{filter_in_place, AllpassCascade, AllpassState};
use crate::design::{DesignLayout, EqualizerDesign};
use crate::error::{contract, Result};
use crate::filterbank::{cascade_delay, Analyzer, PrototypeFilter, Synthesizer};

/// Streaming block processor with a known nominal latency.
pub trait Equalizer: Send {
    /// Filters the next block. Output length may lag input length by less
    /// than one decimation block for filter-bank equalizers.
    fn process(&mut self, x: &[Complex64]) -> Result<Vec<Complex64>>;

    /// Nominal end-to-end delay in input samples.
    fn latency(&self) -> usize;
}

/// Identity.
#[derive(Debug, Default)]
pub struct Passthrough;

impl Equalizer for Passthrough {
    fn process(&mut self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        Ok(x.to_vec())
    }

    fn latency(&self) -> usize {
        0
    }
}

/// Single all-pass cascade at the full sample rate.
pub struct FullbandEqualizer {
    cascade: AllpassCascade,
    state: AllpassState,
    latency: usize,
}

impl FullbandEqualizer {
    pub fn new(design: &EqualizerDesign) -> Result<Self> {
        if design.layout != DesignLayout::Fullband || design.bands.len() != 1 {
            return Err(contract("full-band equalizer needs a full-band design"));
        }
        let band = &design.bands[0];
        let cascade = band.runtime_cascade();
        let state = cascade.new_state();
        Ok(Self {
            cascade,
            state,
            latency: band.spec.beta_prime.max(0) as usize,
        })
    }
}

impl Equalizer for FullbandEqualizer {
    fn process(&mut self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut buf = x.to_vec();
        filter_in_place(&self.cascade, &mut buf, &mut self.state)?;
        Ok(buf)
    }

    fn latency(&self) -> usize {
        self.latency
    }
}

/// Analysis bank, one cascade per band (with its phase correction), synthesis bank.
pub struct SubbandEqualizer {
    analyzer: Analyzer,
    synthesizer: Synthesizer,
    bands: Vec<(AllpassCascade, AllpassState)>,
    pending: Vec<Complex64>,
    decimation: usize,
    latency: usize,
}

impl SubbandEqualizer {
    pub fn new(design: &EqualizerDesign, prototype: &PrototypeFilter) -> Result<Self> {
        let m = prototype.config.bands();
        if design.layout != (DesignLayout::Subband { bands: m }) || design.bands.len() != m {
            return Err(contract(format!(
                "design does not match a {m}-band filter bank"
            )));
        }
        let bands = design
            .bands
            .iter()
            .map(|b| {
                let c = b.runtime_cascade();
                let s = c.new_state();
                (c, s)
            })
            .collect();
        let d = prototype.config.decimation();
        let beta = design.bands[0].spec.beta_prime.max(0) as usize;
        let latency = cascade_delay(&prototype.config, prototype)? + beta * d;
        Ok(Self {
            analyzer: Analyzer::new(prototype),
            synthesizer: Synthesizer::new(prototype),
            bands,
            pending: Vec::new(),
            decimation: d,
            latency,
        })
    }
}

impl Equalizer for SubbandEqualizer {
    fn process(&mut self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.pending.extend_from_slice(x);
        let usable = self.pending.len() / self.decimation * self.decimation;
        let block: Vec<Complex64> = self.pending.drain(..usable).collect();
        let mut frames = self.analyzer.process(&block)?;
        let mut lane = vec![Complex64::new(0.0, 0.0); frames.len()];
        for (k, (cascade, state)) in self.bands.iter_mut().enumerate() {
            for (v, f) in lane.iter_mut().zip(&frames) {
                *v = f.values[k];
            }
            filter_in_place(cascade, &mut lane, state)?;
            for (v, f) in lane.iter().zip(frames.iter_mut()) {
                f.values[k] = *v;
            }
        }
        self.synthesizer.process(&frames)
    }

    fn latency(&self) -> usize {
        self.latency
    }
}
