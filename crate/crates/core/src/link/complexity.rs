//! Real-multiplication counts per output sample.

use serde::{Deserialize, Serialize};

use crate::filterbank::KAPPA;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub n_iir: usize,
    pub bands: usize,
    pub length_factor: usize,
    pub kappa: usize,
    /// Full-band cascade: `4·(N_IIR + 1)`.
    pub c_iir: f64,
    /// Filter bank plus sub-band cascades: `4·log₂M − 6 + 8K + 8κN_IIR/M`.
    pub c_fb_iir: f64,
    /// Continuous minimizer of `c_fb_iir` over `M`: `2κ·N_IIR·ln 2`.
    pub m_opt: f64,
    /// `c_fb_iir` at `m_opt`: `4·log₂(2κ·N_IIR·ln 2) − 6 + 8K + 4/ln 2`.
    pub c_opt: f64,
}

pub fn c_iir(n_iir: usize) -> f64 {
    4.0 * (n_iir as f64 + 1.0)
}

pub fn c_fb_iir(n_iir: usize, m: f64, k: usize) -> f64 {
    4.0 * m.log2() - 6.0 + 8.0 * k as f64 + 8.0 * KAPPA as f64 * n_iir as f64 / m
}

pub fn complexity_report(n_iir: usize, m: usize, k: usize) -> ComplexityReport {
    let kappa = KAPPA as f64;
    let ln2 = std::f64::consts::LN_2;
    let m_opt = 2.0 * kappa * n_iir as f64 * ln2;
    ComplexityReport {
        n_iir,
        bands: m,
        length_factor: k,
        kappa: KAPPA,
        c_iir: c_iir(n_iir),
        c_fb_iir: c_fb_iir(n_iir, m as f64, k),
        m_opt,
        c_opt: 4.0 * m_opt.log2() - 6.0 + 8.0 * k as f64 + 4.0 / ln2,
    }
}
