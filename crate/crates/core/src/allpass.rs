//! First-order complex all-pass sections and their cascades.
//!
//! A section with pole `ρ·e^{jθ}` has transfer function
//! `(−ρe^{−jθ} + z⁻¹) / (1 − ρe^{jθ}z⁻¹)`. Its phase is
//! `−ω − 2·atan2(ρ·sin(ω−θ), 1 − ρ·cos(ω−θ))` and its group delay
//! `(1 − ρ²) / (1 + ρ² − 2ρ·cos(ω−θ))`, which integrates to 2π over a period.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Result};
use crate::util::wrap_angle;

/// Largest pole radius accepted anywhere in the crate.
pub const RHO_MAX: f64 = 0.9999;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllpassSection {
    rho: f64,
    theta: f64,
}

impl AllpassSection {
    /// Creates a section; `theta` is wrapped to `[-π, π)`.
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        if !(0.0..=RHO_MAX).contains(&rho) || !theta.is_finite() {
            return Err(invalid(format!(
                "pole radius must lie in [0, {RHO_MAX}] with finite angle, got rho={rho}, theta={theta}"
            )));
        }
        Ok(Self {
            rho,
            theta: wrap_angle(theta),
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Frequency response at `omega`; always of unit magnitude.
    pub fn response(&self, omega: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -omega);
        let num = z1 - Complex64::from_polar(self.rho, -self.theta);
        let den = Complex64::new(1.0, 0.0) - Complex64::from_polar(self.rho, self.theta) * z1;
        num / den
    }

    /// Group delay in samples at `omega`.
    pub fn group_delay(&self, omega: f64) -> f64 {
        let r = self.rho;
        (1.0 - r * r) / (1.0 + r * r - 2.0 * r * (omega - self.theta).cos())
    }
}

/// Free-function form of [`AllpassSection::response`].
pub fn section_response(s: &AllpassSection, omega: f64) -> Complex64 {
    s.response(omega)
}

/// Free-function form of [`AllpassSection::group_delay`].
pub fn section_group_delay(s: &AllpassSection, omega: f64) -> f64 {
    s.group_delay(omega)
}

/// Ordered chain of sections followed by the constant phase factor `e^{−jφ₀}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AllpassCascade {
    pub sections: Vec<AllpassSection>,
    pub phi0: f64,
    /// Sub-band index this cascade was designed for, if any.
    pub band: Option<usize>,
}

impl AllpassCascade {
    pub fn new(sections: Vec<AllpassSection>, phi0: f64) -> Self {
        Self {
            sections,
            phi0,
            band: None,
        }
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn response(&self, omega: f64) -> Complex64 {
        self.sections
            .iter()
            .fold(Complex64::from_polar(1.0, -self.phi0), |acc, s| {
                acc * s.response(omega)
            })
    }

    /// Sum of the section delays; the constant phase adds none.
    pub fn group_delay(&self, omega: f64) -> f64 {
        self.sections.iter().map(|s| s.group_delay(omega)).sum()
    }

    /// Fresh zero state sized for this cascade.
    pub fn new_state(&self) -> AllpassState {
        AllpassState::new(self.sections.len())
    }
}

pub fn cascade_response(c: &AllpassCascade, omega: f64) -> Complex64 {
    c.response(omega)
}

pub fn cascade_group_delay(c: &AllpassCascade, omega: f64) -> f64 {
    c.group_delay(omega)
}

/// Per-section recursion memory: last input and last output.
#[derive(Debug, Clone, PartialEq)]
pub struct AllpassState {
    x_prev: Vec<Complex64>,
    y_prev: Vec<Complex64>,
}

impl AllpassState {
    pub fn new(n_sections: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            x_prev: vec![zero; n_sections],
            y_prev: vec![zero; n_sections],
        }
    }

    pub fn len(&self) -> usize {
        self.x_prev.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_prev.is_empty()
    }
}

/// Filters `x` through the cascade, carrying `state` across calls.
///
/// Each section runs `y[n] = −ρe^{−jθ}·x[n] + x[n−1] + ρe^{jθ}·y[n−1]`;
/// the chain output is then rotated by `e^{−jφ₀}`. Splitting a record into
/// chunks gives bit-identical output to one call over the whole record.
pub fn filter_stream(
    c: &AllpassCascade,
    x: &[Complex64],
    state: &mut AllpassState,
) -> Result<Vec<Complex64>> {
    let mut buf = x.to_vec();
    filter_in_place(c, &mut buf, state)?;
    Ok(buf)
}

/// In-place variant of [`filter_stream`].
pub fn filter_in_place(
    c: &AllpassCascade,
    buf: &mut [Complex64],
    state: &mut AllpassState,
) -> Result<()> {
    if state.len() != c.sections.len() {
        return Err(contract(format!(
            "state holds {} sections but cascade has {}",
            state.len(),
            c.sections.len()
        )));
    }
    for (i, s) in c.sections.iter().enumerate() {
        let a = -Complex64::from_polar(s.rho, -s.theta);
        let b = Complex64::from_polar(s.rho, s.theta);
        let mut xp = state.x_prev[i];
        let mut yp = state.y_prev[i];
        for v in buf.iter_mut() {
            let xn = *v;
            let yn = a * xn + xp + b * yp;
            xp = xn;
            yp = yn;
            *v = yn;
        }
        state.x_prev[i] = xp;
        state.y_prev[i] = yp;
    }
    if c.phi0 != 0.0 {
        let rot = Complex64::from_polar(1.0, -c.phi0);
        for v in buf.iter_mut() {
            *v *= rot;
        }
    }
    Ok(())
}

/// Rounds to 15 significant decimal digits, the precision of exported coefficients.
pub fn round_sig15(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.14e}").parse().unwrap_or(v)
}

/// Serializable pole pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleRecord {
    pub rho: f64,
    pub theta: f64,
}

/// Text record of one cascade as written to coefficient files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeRecord {
    pub band: Option<usize>,
    pub sections: Vec<PoleRecord>,
    pub phi0: f64,
    pub beta_prime: i64,
}

impl CascadeRecord {
    pub fn from_cascade(c: &AllpassCascade, beta_prime: i64) -> Self {
        Self {
            band: c.band,
            sections: c
                .sections
                .iter()
                .map(|s| PoleRecord {
                    rho: round_sig15(s.rho),
                    theta: round_sig15(s.theta),
                })
                .collect(),
            phi0: round_sig15(c.phi0),
            beta_prime,
        }
    }

    /// Rebuilds the cascade, validating every pole.
    pub fn to_cascade(&self) -> Result<AllpassCascade> {
        let sections = self
            .sections
            .iter()
            .map(|p| AllpassSection::new(p.rho, p.theta))
            .collect::<Result<Vec<_>>>()?;
        Ok(AllpassCascade {
            sections,
            phi0: self.phi0,
            band: self.band,
        })
    }
}
