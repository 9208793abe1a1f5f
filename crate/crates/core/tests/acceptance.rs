//! End-to-end acceptance checks for the reference link (1550 nm, 16 ps/nm/km,
//! 2000 km, 56 GS/s, 32 bands). Each test prints one PASS/FAIL line on stderr.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::sync::OnceLock;

use subband_cdeq::allpass::{filter_stream, AllpassCascade, AllpassSection, RHO_MAX};
use subband_cdeq::channel::{apply_cd, compute_alpha};
use subband_cdeq::design::{
    abel_smith_init, fullband_spec, gd_cost, phase_cost, subband_spec, EqualizerDesign, WeightKind,
};
use subband_cdeq::equalizer::{Equalizer, SubbandEqualizer};
use subband_cdeq::filterbank::{
    analysis, band_leakage_db, design_rrc, reconstruction_nmse_db, synthesis, white_signal,
};
use subband_cdeq::link::{
    complexity_report, design_for, run_link, snr_at_ber, theory_ber, BerPoint, EqualizerMode,
    LinkConfig,
};
use subband_cdeq::optim::check_gradient;
use subband_cdeq::util::energy;

const SEED: u64 = 1;
const N_SYMBOLS: usize = 400_000;

fn report(criterion: &str, ok: bool, detail: &str) {
    let line = format!(
        "[acceptance] criterion {criterion}: {} ({detail})\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn alpha() -> f64 {
    compute_alpha(1550e-9, 16.0, 2000e3, 56e9).unwrap()
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -PI + TAU * i as f64 / n as f64).collect()
}

fn ber_config(equalizer: EqualizerMode) -> LinkConfig {
    LinkConfig {
        equalizer,
        snr_db: (0..8).map(|i| 8.5 + 0.5 * i as f64).collect(),
        n_symbols: N_SYMBOLS,
        seed: SEED,
        ..LinkConfig::default()
    }
}

fn weighted_design() -> &'static EqualizerDesign {
    static D: OnceLock<EqualizerDesign> = OnceLock::new();
    D.get_or_init(|| {
        design_for(&ber_config(EqualizerMode::FbIir))
            .unwrap()
            .unwrap()
    })
}

fn uniform_design() -> &'static EqualizerDesign {
    static D: OnceLock<EqualizerDesign> = OnceLock::new();
    D.get_or_init(|| {
        let cfg = LinkConfig {
            weight_kind: WeightKind::Uniform,
            ..ber_config(EqualizerMode::FbIir)
        };
        design_for(&cfg).unwrap().unwrap()
    })
}

fn fullband_design() -> &'static EqualizerDesign {
    static D: OnceLock<EqualizerDesign> = OnceLock::new();
    D.get_or_init(|| {
        design_for(&ber_config(EqualizerMode::FullbandIir))
            .unwrap()
            .unwrap()
    })
}

/// BER curve of the weighted filter-bank equalizer in the reference configuration.
fn reference_curve() -> &'static Vec<BerPoint> {
    static C: OnceLock<Vec<BerPoint>> = OnceLock::new();
    C.get_or_init(|| run_link(&ber_config(EqualizerMode::FbIir), Some(weighted_design())).unwrap())
}

fn fmt_curve(points: &[BerPoint]) -> String {
    points
        .iter()
        .map(|p| format!("{}:{:.3e}", p.snr_db, p.ber))
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn criterion_1_allpass_identities() {
    let g = grid(4096);
    let sections: Vec<AllpassSection> = [
        (0.0, 0.0),
        (0.5, 1.0),
        (0.9, -2.0),
        (0.99, 0.3),
        (RHO_MAX, 3.0),
    ]
    .iter()
    .map(|&(r, t)| AllpassSection::new(r, t).unwrap())
    .collect();
    let cascade = AllpassCascade::new(sections.clone(), 0.7);
    let mut mag_err: f64 = 0.0;
    for &w in &g {
        for s in &sections {
            mag_err = mag_err.max((s.response(w).norm() - 1.0).abs());
        }
        mag_err = mag_err.max((cascade.response(w).norm() - 1.0).abs());
    }

    // delay vs central difference of the unwrapped phase
    let h = 1e-6;
    let mut fd_err: f64 = 0.0;
    for s in sections.iter().filter(|s| s.rho() <= 0.99) {
        for &w in &g {
            let dphi = (s.response(w + h) / s.response(w - h)).arg() / (2.0 * h);
            let tau = s.group_delay(w);
            fd_err = fd_err.max((tau + dphi).abs() / tau.abs());
        }
    }

    // delay area, on a grid fine enough for the sharpest pole used
    let mut area_err: f64 = 0.0;
    let fine = 1 << 20;
    for s in sections.iter().filter(|s| s.rho() <= 0.99) {
        let area: f64 =
            grid(fine).iter().map(|&w| s.group_delay(w)).sum::<f64>() * TAU / fine as f64;
        area_err = area_err.max((area - TAU).abs() / TAU);
    }
    let ok = mag_err <= 1e-12 && fd_err <= 1e-6 && area_err <= 1e-6;
    report(
        "1",
        ok,
        &format!("max ||H|-1| {mag_err:.1e}, delay vs FD {fd_err:.1e}, area error {area_err:.1e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_2_subband_constants() {
    let a = alpha();
    let n_iir = fullband_spec(a).unwrap().n_sections;
    let s0 = subband_spec(a, 32, 0).unwrap();
    let s16 = subband_spec(a, 32, 16).unwrap();
    let s17 = subband_spec(a, 32, 17).unwrap();
    let formula_ok = (0..32).all(|k| {
        let s = subband_spec(a, 32, k).unwrap();
        s.n_sections as f64 == (26.0 - TAU * s.alpha_prime * s.k_prime as f64).ceil()
    });
    let ok = (a - 63.995).abs() <= 0.01
        && n_iir == 403
        && (s0.alpha_prime - 0.250).abs() < 5e-4
        && s0.beta_prime == 26
        && s17.n_sections == 50
        && s16.n_sections == 1
        && formula_ok;
    report(
        "2",
        ok,
        &format!(
            "alpha {a:.4}, N_IIR {n_iir}, alpha' {:.4}, beta' {}, N(17) {}, N(16) {}",
            s0.alpha_prime, s0.beta_prime, s17.n_sections, s16.n_sections
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_3_filter_bank_near_pr() {
    let mut nmse = Vec::new();
    let mut leak = f64::INFINITY;
    for (k, roll) in [(8, 0.2), (2, 0.9)] {
        let p = design_rrc(32, k, roll).unwrap();
        nmse.push(reconstruction_nmse_db(&p, 1 << 16, 11).unwrap());
        for band in 0..32 {
            leak = leak.min(band_leakage_db(&p, band).unwrap());
        }
    }
    let ok = nmse.iter().all(|&d| d <= -30.0) && leak >= 40.0;
    report(
        "3",
        ok,
        &format!(
            "NMSE (32,8,0.2) {:.2} dB, (32,2,0.9) {:.2} dB, limit -30 dB; worst non-adjacent leakage {leak:.1} dB",
            nmse[0], nmse[1]
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_4_optimization_quality() {
    let design = weighted_design();
    let mut failures = Vec::new();
    for b in &design.bands {
        let r = &b.report;
        if r.phase_cost_final > r.phase_cost_joint_entry || r.phase_cost_final.is_nan() {
            failures.push(format!(
                "band {} phase {} > {}",
                r.band, r.phase_cost_final, r.phase_cost_joint_entry
            ));
        }
        if r.gd_cost_init <= r.gd_cost_final || r.gd_cost_final.is_nan() {
            failures.push(format!(
                "band {} gd {} <= {}",
                r.band, r.gd_cost_init, r.gd_cost_final
            ));
        }
        if b.cascade.sections.iter().any(|s| s.rho() > RHO_MAX) {
            failures.push(format!("band {} radius above bound", r.band));
        }
    }

    // gradients at a perturbed start of every band
    let grid = design.grid;
    let w = design.weighting;
    let mut worst: f64 = 0.0;
    for b in &design.bands {
        let spec = b.spec;
        let x: Vec<f64> = abel_smith_init(&spec, &grid)
            .unwrap()
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                [
                    (s.rho() * 0.97 + 0.02).min(0.98),
                    s.theta() + 0.02 * (i % 3) as f64,
                ]
            })
            .collect();
        let secs = |x: &[f64]| -> Vec<AllpassSection> {
            x.chunks(2)
                .map(|p| AllpassSection::new(p[0], p[1]).unwrap())
                .collect()
        };
        let e_gd = check_gradient(
            |x, g| {
                let (c, gr) = gd_cost(&secs(x), &spec, &w, &grid).unwrap();
                g.copy_from_slice(&gr);
                c
            },
            &x,
            1e-6,
        );
        let mut xp = x.clone();
        xp.push(0.3);
        let e_ph = check_gradient(
            |x, g| {
                let n = x.len() - 1;
                let (c, gr) = phase_cost(&secs(&x[..n]), x[n], &spec, &w, &grid).unwrap();
                g.copy_from_slice(&gr);
                c
            },
            &xp,
            1e-6,
        );
        worst = worst.max(e_gd).max(e_ph);
    }
    if worst > 1e-6 {
        failures.push(format!("gradient mismatch {worst:.2e}"));
    }
    let ok = failures.is_empty();
    report(
        "4",
        ok,
        &format!(
            "{} bands, worst gradient mismatch {worst:.1e}; {}",
            design.bands.len(),
            failures.join("; ")
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_5_complexity() {
    let r = complexity_report(403, 32, 8);
    let ok = r.c_iir == 1616.0
        && (r.c_fb_iir - 279.5).abs() < 1e-9
        && (r.m_opt - 1117.5).abs() < 0.25
        && (r.c_opt - 104.3).abs() < 0.05
        && r.c_fb_iir < r.c_iir;
    report(
        "5",
        ok,
        &format!(
            "C_IIR {}, C_FB_IIR {}, M_opt {:.2}, C_opt {:.2}",
            r.c_iir, r.c_fb_iir, r.m_opt, r.c_opt
        ),
    );
    assert!(ok);
}

fn theory_snr_at(target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 20.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if theory_ber(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_6a_back_to_back() {
    let cfg = LinkConfig {
        length_km: 0.0,
        ..ber_config(EqualizerMode::None)
    };
    let pts = run_link(&cfg, None).unwrap();
    let s = snr_at_ber(&pts, 1e-3);
    let theory = theory_snr_at(1e-3);
    let ok = s.is_some_and(|s| (s - theory).abs() <= 0.2);
    report(
        "6a",
        ok,
        &format!(
            "SNR@1e-3 {s:?} dB vs theory {theory:.3} dB; {}",
            fmt_curve(&pts)
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_6b_reference_snr() {
    let pts = reference_curve();
    let s = snr_at_ber(pts, 1e-3);
    let ok = s.is_some_and(|s| (s - 10.1).abs() <= 0.7);
    report(
        "6b",
        ok,
        &format!("SNR@1e-3 {s:?} dB, target 10.1 +- 0.7; {}", fmt_curve(pts)),
    );
    assert!(ok);
}

#[test]
fn criterion_6c_ordering() {
    let weighted = reference_curve();
    let uniform_cfg = LinkConfig {
        weight_kind: WeightKind::Uniform,
        ..ber_config(EqualizerMode::FbIir)
    };
    let uniform = run_link(&uniform_cfg, Some(uniform_design())).unwrap();
    let full = run_link(
        &ber_config(EqualizerMode::FullbandIir),
        Some(fullband_design()),
    )
    .unwrap();

    let mut violations = Vec::new();
    for (w, u) in weighted.iter().zip(&uniform) {
        if w.snr_db >= 9.0 && w.errors > u.errors {
            violations.push(format!(
                "{} dB: {} > {} errors",
                w.snr_db, w.errors, u.errors
            ));
        }
    }
    let s_w = snr_at_ber(weighted, 1e-3);
    let s_f = snr_at_ber(&full, 1e-3);
    let snr_ok = matches!((s_w, s_f), (Some(a), Some(b)) if a <= b + 0.2);
    let ok = violations.is_empty() && snr_ok;
    report(
        "6c",
        ok,
        &format!(
            "weighted vs uniform violations [{}]; SNR@1e-3 weighted {s_w:?} vs full-band {s_f:?}; uniform {}; full-band {}",
            violations.join(", "),
            fmt_curve(&uniform),
            fmt_curve(&full)
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_6d_prototype_trend() {
    // Same roll-off rows are compared: roll 0.9 at L = 64 against roll 0.9 at
    // L = 256, roll 0.2 at L = 128 against roll 0.2 at L = 256.
    let snr = |length_factor: usize, roll: f64| {
        let cfg = LinkConfig {
            length_factor,
            prototype_roll_off: roll,
            ..ber_config(EqualizerMode::FbIir)
        };
        // band designs depend on the band count only, so the reference design is reused
        snr_at_ber(&run_link(&cfg, Some(weighted_design())).unwrap(), 1e-3)
    };
    let base = snr_at_ber(reference_curve(), 1e-3);
    let wide_long = snr(8, 0.9);
    let wide_short = snr(2, 0.9);
    let narrow_short = snr(4, 0.2);
    let ok = match (base, wide_long, wide_short, narrow_short) {
        (Some(b), Some(wl), Some(ws), Some(ns)) => (ws - wl).abs() <= 0.3 && ns - b >= 0.5,
        _ => false,
    };
    report(
        "6d",
        ok,
        &format!(
            "SNR@1e-3: roll 0.2 L=256 {base:?}, L=128 {narrow_short:?}; roll 0.9 L=256 {wide_long:?}, L=64 {wide_short:?}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_7_properties() {
    let mut failures = Vec::new();

    // determinism per seed
    let cfg = LinkConfig {
        length_km: 0.0,
        equalizer: EqualizerMode::None,
        snr_db: vec![6.0, 8.0],
        n_symbols: 20_000,
        seed: 77,
        ..LinkConfig::default()
    };
    if run_link(&cfg, None).unwrap() != run_link(&cfg, None).unwrap() {
        failures.push("link not deterministic".to_string());
    }

    // filter-bank linearity and hop-shift invariance
    let p = design_rrc(32, 8, 0.2).unwrap();
    let fb = |x: &[_]| synthesis(&p.config, &p, &analysis(&p.config, &p, x).unwrap()).unwrap();
    let (x1, x2) = (white_signal(1024, 1), white_signal(1024, 2));
    let c = num_complex::Complex64::new(0.3, -1.2);
    let mix: Vec<_> = x1.iter().zip(&x2).map(|(a, b)| a * c + b).collect();
    let (y1, y2, ym) = (fb(&x1), fb(&x2), fb(&mix));
    let lin = ym
        .iter()
        .zip(y1.iter().zip(&y2))
        .map(|(m, (a, b))| (m - (a * c + b)).norm())
        .fold(0.0, f64::max);
    if lin > 1e-10 {
        failures.push(format!("linearity error {lin:.1e}"));
    }
    let mut xs = vec![num_complex::Complex64::new(0.0, 0.0); 48];
    xs.extend_from_slice(&x1);
    let ys = fb(&xs);
    let shift = y1
        .iter()
        .zip(&ys[48..])
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if shift > 1e-10 {
        failures.push(format!("shift error {shift:.1e}"));
    }

    // CD energy conservation
    let x = white_signal(5000, 3);
    let e = (energy(&apply_cd(&x, alpha()).unwrap()) / energy(&x) - 1.0).abs();
    if e > 1e-12 {
        failures.push(format!("CD energy error {e:.1e}"));
    }

    // chunked vs one-shot streaming: all-pass cascade and the full sub-band equalizer
    let design = weighted_design();
    let band = design.bands[17].runtime_cascade();
    let whole = filter_stream(&band, &x, &mut band.new_state()).unwrap();
    let mut st = band.new_state();
    let mut parts = filter_stream(&band, &x[..1234], &mut st).unwrap();
    parts.extend(filter_stream(&band, &x[1234..], &mut st).unwrap());
    if parts != whole {
        failures.push("all-pass chunking changes output".to_string());
    }
    let proto = design_rrc(32, 8, 0.2).unwrap();
    let whole = SubbandEqualizer::new(design, &proto)
        .unwrap()
        .process(&x)
        .unwrap();
    let mut eq = SubbandEqualizer::new(design, &proto).unwrap();
    let mut parts = Vec::new();
    for chunk in x.chunks(777) {
        parts.extend(eq.process(chunk).unwrap());
    }
    if parts != whole {
        failures.push("equalizer chunking changes output".to_string());
    }

    let ok = failures.is_empty();
    report(
        "7",
        ok,
        &format!(
            "determinism, FB linearity/shift, CD energy, streaming; {}",
            failures.join("; ")
        ),
    );
    assert!(ok);
}
