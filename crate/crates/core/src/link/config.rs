//! Link configuration. Field names double as config-file keys and CLI flags.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::design::{FrequencyGrid, WeightKind, WeightingSpec};
use crate::error::{invalid, Error, Result};
use crate::filterbank::FilterBankConfig;
use crate::optim::OptimizerSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EqualizerMode {
    /// No equalizer (back-to-back or unequalized reference).
    None,
    /// One all-pass cascade at the full sampling rate.
    FullbandIir,
    /// Filter bank with one all-pass cascade per band.
    #[default]
    FbIir,
}

impl std::str::FromStr for EqualizerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "fullband_iir" => Ok(Self::FullbandIir),
            "fb_iir" => Ok(Self::FbIir),
            _ => Err(invalid(format!("unknown equalizer mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    /// Symbol rate (Bd).
    pub baud: f64,
    /// Samples per symbol; only 2 is supported.
    pub oversampling: usize,
    pub lambda0_nm: f64,
    pub dispersion_ps_nm_km: f64,
    pub length_km: f64,
    /// Number of filter-bank bands `M`.
    pub bands: usize,
    /// Prototype length factor `K` (prototype length `K·M`).
    pub length_factor: usize,
    pub prototype_roll_off: f64,
    pub weight_kind: WeightKind,
    /// Sub-band weighting cutoff in units of π.
    pub weight_cutoff_pi: f64,
    pub weight_roll_off: f64,
    /// Cutoff of the full-band baseline weighting in units of π.
    pub fullband_cutoff_pi: f64,
    pub grid_points: usize,
    pub fullband_grid_points: usize,
    pub tx_roll_off: f64,
    pub equalizer: EqualizerMode,
    /// Es/N0 values in dB.
    pub snr_db: Vec<f64>,
    /// Symbols per SNR point, pilots included.
    pub n_symbols: usize,
    pub n_pilots: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            baud: 28e9,
            oversampling: 2,
            lambda0_nm: 1550.0,
            dispersion_ps_nm_km: 16.0,
            length_km: 2000.0,
            bands: 32,
            length_factor: 8,
            prototype_roll_off: 0.2,
            weight_kind: WeightKind::RcSquared,
            weight_cutoff_pi: 0.6,
            weight_roll_off: 0.1,
            fullband_cutoff_pi: 0.5,
            grid_points: FrequencyGrid::DEFAULT_POINTS,
            fullband_grid_points: 16384,
            tx_roll_off: 0.1,
            equalizer: EqualizerMode::FbIir,
            snr_db: vec![8.0, 9.0, 10.0, 11.0, 12.0],
            n_symbols: 400_000,
            n_pilots: 1000,
            seed: 1,
            max_iterations: 500,
            gradient_tolerance: 1e-8,
        }
    }
}

impl LinkConfig {
    /// Reads a flat `key = value` file (TOML syntax); missing keys take defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn sample_rate(&self) -> f64 {
        self.baud * self.oversampling as f64
    }

    pub fn channel(&self) -> Result<ChannelParams> {
        ChannelParams::new(
            self.lambda0_nm * 1e-9,
            self.dispersion_ps_nm_km,
            self.length_km * 1e3,
            self.sample_rate(),
        )
    }

    pub fn filter_bank(&self) -> Result<FilterBankConfig> {
        FilterBankConfig::new(self.bands, self.length_factor)
    }

    /// Weighting for the sub-band designs.
    pub fn weighting(&self) -> Result<WeightingSpec> {
        match self.weight_kind {
            WeightKind::Uniform => Ok(WeightingSpec::uniform()),
            WeightKind::RcSquared => {
                WeightingSpec::rc_squared(self.weight_cutoff_pi * PI, self.weight_roll_off)
            }
        }
    }

    /// Weighting for the full-band baseline; the taper follows the transmit spectrum.
    pub fn fullband_weighting(&self) -> Result<WeightingSpec> {
        match self.weight_kind {
            WeightKind::Uniform => Ok(WeightingSpec::uniform()),
            WeightKind::RcSquared => {
                WeightingSpec::rc_squared(self.fullband_cutoff_pi * PI, self.tx_roll_off)
            }
        }
    }

    pub fn optimizer(&self) -> OptimizerSettings {
        OptimizerSettings {
            max_iterations: self.max_iterations,
            gradient_tolerance: self.gradient_tolerance,
            ..OptimizerSettings::default()
        }
    }

    /// Checks everything needed to run the link.
    pub fn validate(&self) -> Result<()> {
        if self.oversampling != 2 {
            return Err(invalid(format!(
                "oversampling must be 2, got {}",
                self.oversampling
            )));
        }
        if !(self.baud.is_finite() && self.baud > 0.0) {
            return Err(invalid("baud must be positive"));
        }
        if !(0.0..=1.0).contains(&self.tx_roll_off) {
            return Err(invalid("tx_roll_off must lie in [0, 1]"));
        }
        if self.n_pilots == 0 || self.n_pilots >= self.n_symbols {
            return Err(invalid("need 0 < n_pilots < n_symbols"));
        }
        if self.snr_db.iter().any(|s| s.is_nan()) {
            return Err(invalid("SNR values must not be NaN"));
        }
        self.channel()?;
        self.optimizer().validate()?;
        if self.equalizer == EqualizerMode::FbIir {
            self.filter_bank()?;
            self.weighting()?;
            FrequencyGrid::new(self.grid_points)?;
        }
        if self.equalizer == EqualizerMode::FullbandIir {
            self.fullband_weighting()?;
            FrequencyGrid::new(self.fullband_grid_points)?;
        }
        Ok(())
    }

    /// `validate` plus the minimum record length for a BER estimate.
    pub fn validate_for_ber(&self) -> Result<()> {
        self.validate()?;
        if self.n_symbols < 10_000 {
            return Err(invalid(format!(
                "BER runs need at least 10^4 symbols, got {}",
                self.n_symbols
            )));
        }
        if self.snr_db.is_empty() {
            return Err(invalid("empty SNR list"));
        }
        Ok(())
    }
}
