//! Equalizer design: per-band targets, pole initialization and the
//! four-stage optimization
//!
//! 1. area-based pole placement,
//! 2. group-delay MSE minimization over `(ρᵢ, θᵢ)`,
//! 3. closed-form constant phase `φ₀`,
//! 4. joint phase-transfer MSE minimization over `(ρᵢ, θᵢ, φ₀)`.
//!
//! Radii are optimized through `ρ = ρ_max·σ(u)` (logistic `σ`), so every
//! iterate is a stable filter.

mod cost;
mod init;
mod target;
mod weighting;

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cost::{gd_cost, optimal_phi0, phase_cost, BandProblem};
pub use init::abel_smith_init;
pub use target::{desired_group_delay, desired_phase, fullband_spec, subband_spec, SubbandSpec};
pub use weighting::{FrequencyGrid, WeightKind, WeightingSpec};

use crate::allpass::{AllpassCascade, AllpassSection, CascadeRecord, RHO_MAX};
use crate::error::{Error, Result};
use crate::filterbank::FilterBankConfig;
use crate::optim::{minimize, OptimizationReport, OptimizerSettings};
use crate::util::wrap_angle;

/// Cost bookkeeping across the design stages of one band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub band: usize,
    pub n_sections: usize,
    /// Group-delay MSE of the area-based initialization.
    pub gd_cost_init: f64,
    /// Group-delay MSE after stage 2.
    pub gd_cost_optimized: f64,
    /// Group-delay MSE of the final (jointly optimized) cascade.
    pub gd_cost_final: f64,
    /// Phase-transfer MSE entering stage 3, with `φ₀ = 0`.
    pub phase_cost_zero_phi0: f64,
    /// Phase-transfer MSE entering stage 4, with the closed-form `φ₀`.
    pub phase_cost_joint_entry: f64,
    pub phase_cost_final: f64,
    pub gd_iterations: usize,
    pub joint_iterations: usize,
}

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn rho_to_u(rho: f64) -> f64 {
    let p = (rho / RHO_MAX).clamp(1e-6, 1.0 - 1e-12);
    (p / (1.0 - p)).ln()
}

fn u_to_rho(u: f64) -> (f64, f64) {
    let s = logistic(u);
    (RHO_MAX * s, RHO_MAX * s * (1.0 - s))
}

fn sections_from(rho: &[f64], theta: &[f64]) -> Result<Vec<AllpassSection>> {
    rho.iter()
        .zip(theta)
        .map(|(&r, &t)| AllpassSection::new(r.clamp(0.0, RHO_MAX), t))
        .collect()
}

fn fail(band: usize, stage: &'static str) -> impl FnOnce(Error) -> Error {
    move |e| Error::DesignFailure {
        band: Some(band),
        stage,
        source: Box::new(e),
    }
}

/// Runs the four design stages for one band.
///
/// A band with no sections gets an empty cascade carrying the closed-form `φ₀`.
pub fn design_band(
    spec: &SubbandSpec,
    weighting: &WeightingSpec,
    grid: &FrequencyGrid,
    settings: &OptimizerSettings,
) -> Result<(AllpassCascade, BandReport)> {
    let band = spec.k;
    let problem = BandProblem::new(spec, weighting, grid)?;
    let n = spec.n_sections;

    if n == 0 {
        let phi0 = problem
            .optimal_phi0_raw(&[], &[])
            .map_err(fail(band, "constant phase"))?;
        let (c0, _) = problem.phase_cost_raw(&[], &[], 0.0, &mut [], &mut []);
        let (c, _) = problem.phase_cost_raw(&[], &[], phi0, &mut [], &mut []);
        let gd = problem.gd_cost_raw(&[], &[], &mut [], &mut []);
        let report = BandReport {
            band,
            n_sections: 0,
            gd_cost_init: gd,
            gd_cost_optimized: gd,
            gd_cost_final: gd,
            phase_cost_zero_phi0: c0,
            phase_cost_joint_entry: c,
            phase_cost_final: c,
            gd_iterations: 0,
            joint_iterations: 0,
        };
        let cascade = AllpassCascade {
            sections: Vec::new(),
            phi0: wrap_angle(phi0),
            band: Some(band),
        };
        return Ok((cascade, report));
    }

    // stage 1
    let init = abel_smith_init(spec, grid).map_err(fail(band, "abel-smith"))?;
    let rho0: Vec<f64> = init.iter().map(AllpassSection::rho).collect();
    let theta0: Vec<f64> = init.iter().map(AllpassSection::theta).collect();
    let mut scratch_r = vec![0.0; n];
    let mut scratch_t = vec![0.0; n];
    let gd_init = problem.gd_cost_raw(&rho0, &theta0, &mut scratch_r, &mut scratch_t);

    // stage 2: params = [u₁..u_N, θ₁..θ_N]
    let x0: Vec<f64> = rho0
        .iter()
        .map(|&r| rho_to_u(r))
        .chain(theta0.iter().copied())
        .collect();
    let (x_gd, gd_rep) = run_stage(&problem, &x0, settings, false)
        .map_err(fail(band, "group-delay optimization"))?;
    let (rho1, theta1) = unpack(&x_gd, n);
    let gd_opt = problem.gd_cost_raw(&rho1, &theta1, &mut scratch_r, &mut scratch_t);

    // stage 3
    let phi0 = problem
        .optimal_phi0_raw(&rho1, &theta1)
        .map_err(fail(band, "constant phase"))?;
    let (c_zero, _) = problem.phase_cost_raw(&rho1, &theta1, 0.0, &mut scratch_r, &mut scratch_t);
    let (c_entry, _) = problem.phase_cost_raw(&rho1, &theta1, phi0, &mut scratch_r, &mut scratch_t);

    // stage 4: params = [u₁..u_N, θ₁..θ_N, φ₀]
    let mut x1: Vec<f64> = rho1
        .iter()
        .map(|&r| rho_to_u(r))
        .chain(theta1.iter().copied())
        .collect();
    x1.push(phi0);
    let (x_joint, joint_rep) =
        run_stage(&problem, &x1, settings, true).map_err(fail(band, "joint optimization"))?;
    let (rho2, theta2) = unpack(&x_joint, n);
    let phi_final = x_joint[2 * n];
    let (c_final, _) =
        problem.phase_cost_raw(&rho2, &theta2, phi_final, &mut scratch_r, &mut scratch_t);
    let gd_final = problem.gd_cost_raw(&rho2, &theta2, &mut scratch_r, &mut scratch_t);

    let sections = sections_from(&rho2, &theta2).map_err(fail(band, "joint optimization"))?;
    let report = BandReport {
        band,
        n_sections: n,
        gd_cost_init: gd_init,
        gd_cost_optimized: gd_opt,
        gd_cost_final: gd_final,
        phase_cost_zero_phi0: c_zero,
        phase_cost_joint_entry: c_entry,
        phase_cost_final: c_final,
        gd_iterations: gd_rep.iterations,
        joint_iterations: joint_rep.iterations,
    };
    Ok((
        AllpassCascade {
            sections,
            phi0: wrap_angle(phi_final),
            band: Some(band),
        },
        report,
    ))
}

fn unpack(x: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let rho = x[..n].iter().map(|&u| u_to_rho(u).0).collect();
    let theta = x[n..2 * n].to_vec();
    (rho, theta)
}

fn run_stage(
    problem: &BandProblem,
    x0: &[f64],
    settings: &OptimizerSettings,
    joint: bool,
) -> Result<(Vec<f64>, OptimizationReport)> {
    let n = problem.n_sections();
    let mut rho = vec![0.0; n];
    let mut drho = vec![0.0; n];
    let mut gr = vec![0.0; n];
    let mut gt = vec![0.0; n];
    let cost = move |x: &[f64], g: &mut [f64]| -> f64 {
        for i in 0..n {
            let (r, dr) = u_to_rho(x[i]);
            rho[i] = r;
            drho[i] = dr;
        }
        let theta = &x[n..2 * n];
        let c = if joint {
            let (c, gphi) = problem.phase_cost_raw(&rho, theta, x[2 * n], &mut gr, &mut gt);
            g[2 * n] = gphi;
            c
        } else {
            problem.gd_cost_raw(&rho, theta, &mut gr, &mut gt)
        };
        for i in 0..n {
            g[i] = gr[i] * drho[i];
            g[n + i] = gt[i];
        }
        c
    };
    minimize(cost, x0, settings)
}

/// A designed band: target constants, cascade and runtime phase correction.
#[derive(Debug, Clone, PartialEq)]
pub struct BandDesign {
    pub spec: SubbandSpec,
    /// Designed sections with the fitted constant phase `φ₀` in `phi0`.
    pub cascade: AllpassCascade,
    /// Phase `ψ_k` applied (as `e^{jψ_k}`) to the section-chain output so
    /// that every band realizes the same full-band delay.
    pub psi: f64,
    pub report: BandReport,
}

impl BandDesign {
    /// Cascade used at runtime: the designed sections followed by `e^{jψ_k}`.
    pub fn runtime_cascade(&self) -> AllpassCascade {
        AllpassCascade {
            sections: self.cascade.sections.clone(),
            phi0: -self.psi,
            band: self.cascade.band,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "snake_case")]
pub enum DesignLayout {
    /// One cascade for the full-rate signal.
    Fullband,
    /// One cascade per band of an `bands`-band filter bank.
    Subband {
        #[serde(rename = "band_count")]
        bands: usize,
    },
}

/// Complete equalizer design.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizerDesign {
    pub alpha: f64,
    pub layout: DesignLayout,
    pub weighting: WeightingSpec,
    pub grid: FrequencyGrid,
    pub bands: Vec<BandDesign>,
}

impl EqualizerDesign {
    pub fn total_sections(&self) -> usize {
        self.bands.iter().map(|b| b.spec.n_sections).sum()
    }
}

/// Band correction `ψ_k = φ₀` wrapped to `[−π, π)`.
///
/// The optimized band satisfies `G·H ≈ e^{−jφ₀}·e^{−jβ'(ω' − k'π)}`, and a
/// full-band delay of `β'·M/2` samples appears in band `k` as
/// `e^{−jβ'ω'}·(−1)^{β'k'}`, which equals `e^{−jβ'(ω' − k'π)}`. Removing
/// `φ₀` alone therefore aligns all bands for any parity of `β'`.
pub fn band_correction(phi0: f64, _spec: &SubbandSpec) -> f64 {
    wrap_angle(phi0)
}

/// Designs every band of an `M`-band bank. Bands are independent and run in parallel.
pub fn design_all_bands(
    alpha: f64,
    fb: &FilterBankConfig,
    weighting: &WeightingSpec,
    grid: &FrequencyGrid,
    settings: &OptimizerSettings,
) -> Result<EqualizerDesign> {
    let m = fb.bands();
    let bands = (0..m)
        .into_par_iter()
        .map(|k| {
            let spec = subband_spec(alpha, m, k)?;
            let (cascade, report) = design_band(&spec, weighting, grid, settings)?;
            let psi = band_correction(cascade.phi0, &spec);
            Ok(BandDesign {
                spec,
                cascade,
                psi,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EqualizerDesign {
        alpha,
        layout: DesignLayout::Subband { bands: m },
        weighting: *weighting,
        grid: *grid,
        bands,
    })
}

/// Full-band baseline design (`N_IIR` sections at the full sampling rate).
pub fn design_fullband(
    alpha: f64,
    weighting: &WeightingSpec,
    grid: &FrequencyGrid,
    settings: &OptimizerSettings,
) -> Result<EqualizerDesign> {
    let spec = fullband_spec(alpha)?;
    let (cascade, report) = design_band(&spec, weighting, grid, settings)?;
    let psi = band_correction(cascade.phi0, &spec);
    Ok(EqualizerDesign {
        alpha,
        layout: DesignLayout::Fullband,
        weighting: *weighting,
        grid: *grid,
        bands: vec![BandDesign {
            spec,
            cascade,
            psi,
            report,
        }],
    })
}

const FORMAT_TAG: &str = "subband-cdeq/coefficients";

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BandRecord {
    #[serde(flatten)]
    cascade: CascadeRecord,
    k_prime: i64,
    alpha_prime: f64,
    n_sections: usize,
    psi: f64,
    report: BandReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoefficientFile {
    format: String,
    version: u32,
    alpha: f64,
    #[serde(flatten)]
    layout: DesignLayout,
    weighting: WeightingSpec,
    grid_points: usize,
    bands: Vec<BandRecord>,
}

impl EqualizerDesign {
    /// Serializes to the JSON coefficient format (15 significant digits per coefficient).
    pub fn to_json(&self) -> Result<String> {
        let file = CoefficientFile {
            format: FORMAT_TAG.to_string(),
            version: 1,
            alpha: self.alpha,
            layout: self.layout,
            weighting: self.weighting,
            grid_points: self.grid.len(),
            bands: self
                .bands
                .iter()
                .map(|b| BandRecord {
                    cascade: CascadeRecord::from_cascade(&b.cascade, b.spec.beta_prime),
                    k_prime: b.spec.k_prime,
                    alpha_prime: b.spec.alpha_prime,
                    n_sections: b.spec.n_sections,
                    psi: crate::allpass::round_sig15(b.psi),
                    report: b.report.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CoefficientFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if file.format != FORMAT_TAG || file.version != 1 {
            return Err(Error::Format(format!(
                "unsupported coefficient file {} v{}",
                file.format, file.version
            )));
        }
        let bands = file
            .bands
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let cascade = r.cascade.to_cascade()?;
                if cascade.len() != r.n_sections {
                    return Err(Error::Format(format!("band {i}: section count mismatch")));
                }
                let spec = SubbandSpec {
                    k: r.cascade.band.unwrap_or(i),
                    k_prime: r.k_prime,
                    alpha_prime: r.alpha_prime,
                    beta_prime: r.cascade.beta_prime,
                    n_sections: r.n_sections,
                };
                Ok(BandDesign {
                    spec,
                    cascade,
                    psi: r.psi,
                    report: r.report,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let DesignLayout::Subband { bands: m } = file.layout {
            if bands.len() != m {
                return Err(Error::Format(format!(
                    "expected {m} bands, found {}",
                    bands.len()
                )));
            }
        }
        Ok(Self {
            alpha: file.alpha,
            layout: file.layout,
            weighting: file.weighting,
            grid: FrequencyGrid::new(file.grid_points)?,
            bands,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Default sub-band weighting: squared RRC with `ω'_c = 0.6π`, roll-off 0.1.
pub fn default_weighting() -> WeightingSpec {
    WeightingSpec {
        kind: WeightKind::RcSquared,
        omega_c: 0.6 * PI,
        roll_off: 0.1,
    }
}
