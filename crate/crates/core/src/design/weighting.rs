//! Quadrature grids and frequency weightings for the design costs.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Uniform samples of `[−π, π)`, endpoint excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    n_points: usize,
}

impl FrequencyGrid {
    pub const MIN_POINTS: usize = 512;
    pub const DEFAULT_POINTS: usize = 2048;

    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(invalid(format!(
                "grid needs at least {} points, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self { n_points })
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n_points as f64
    }

    pub fn omega(&self, i: usize) -> f64 {
        -PI + self.spacing() * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.omega(i))
    }
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self {
            n_points: Self::DEFAULT_POINTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Uniform,
    /// Squared-magnitude RRC, i.e. a raised-cosine taper.
    RcSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightingSpec {
    pub kind: WeightKind,
    /// Cutoff frequency (rad) in the sub-band domain.
    pub omega_c: f64,
    pub roll_off: f64,
}

impl WeightingSpec {
    pub fn uniform() -> Self {
        Self {
            kind: WeightKind::Uniform,
            omega_c: PI,
            roll_off: 0.0,
        }
    }

    pub fn rc_squared(omega_c: f64, roll_off: f64) -> Result<Self> {
        let w = Self {
            kind: WeightKind::RcSquared,
            omega_c,
            roll_off,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == WeightKind::RcSquared
            && !(self.omega_c > 0.0 && self.omega_c <= PI && (0.0..=1.0).contains(&self.roll_off))
        {
            return Err(invalid(format!(
                "rc_squared weighting needs 0 < omega_c <= pi and roll-off in [0, 1], got {self:?}"
            )));
        }
        Ok(())
    }

    /// Weight at `omega`; 1 in the passband, raised-cosine taper, 0 beyond `ω_c(1 + r)`.
    pub fn weight(&self, omega: f64) -> f64 {
        match self.kind {
            WeightKind::Uniform => 1.0,
            WeightKind::RcSquared => {
                let a = omega.abs();
                let lo = self.omega_c * (1.0 - self.roll_off);
                let hi = self.omega_c * (1.0 + self.roll_off);
                if a <= lo {
                    1.0
                } else if a >= hi {
                    0.0
                } else {
                    0.5 * (1.0 + (PI * (a - lo) / (hi - lo)).cos())
                }
            }
        }
    }
}
