use subband_cdeq::link::{
    c_fb_iir, complexity_report, run_link, snr_at_ber, theory_ber, EqualizerMode, LinkConfig,
};

fn back_to_back(snr_db: Vec<f64>, n_symbols: usize, seed: u64) -> LinkConfig {
    LinkConfig {
        length_km: 0.0,
        equalizer: EqualizerMode::None,
        snr_db,
        n_symbols,
        seed,
        ..LinkConfig::default()
    }
}

#[test]
fn back_to_back_matches_gray_qpsk_theory() {
    let pts = run_link(&back_to_back(vec![9.8], 400_000, 21), None).unwrap();
    let ratio = pts[0].ber / theory_ber(9.8);
    assert!(
        (0.7..=1.4).contains(&ratio),
        "BER {} vs theory {}",
        pts[0].ber,
        theory_ber(9.8)
    );
}

#[test]
fn ber_bookkeeping() {
    let cfg = back_to_back(vec![4.0, 6.0, 8.0], 30_000, 2);
    let pts = run_link(&cfg, None).unwrap();
    for p in &pts {
        assert_eq!(p.bits, 2 * (30_000 - 1000));
        assert_eq!(p.ber, p.errors as f64 / p.bits as f64);
    }
    // monotone within two binomial standard deviations
    for w in pts.windows(2) {
        let sd = (w[0].ber * (1.0 - w[0].ber) / w[0].bits as f64).sqrt();
        assert!(w[1].ber <= w[0].ber + 2.0 * sd);
    }
}

#[test]
fn results_do_not_depend_on_point_order_or_neighbours() {
    let a = run_link(&back_to_back(vec![5.0, 7.0], 20_000, 8), None).unwrap();
    let b = run_link(&back_to_back(vec![5.0, 7.0, 9.0], 20_000, 8), None).unwrap();
    assert_eq!(a[..], b[..2]);
    let c = run_link(&back_to_back(vec![5.0, 7.0], 20_000, 9), None).unwrap();
    assert_ne!(a, c);
}

#[test]
fn missing_design_is_a_contract_error() {
    let cfg = LinkConfig {
        equalizer: EqualizerMode::FbIir,
        snr_db: vec![10.0],
        n_symbols: 20_000,
        ..LinkConfig::default()
    };
    assert!(run_link(&cfg, None).is_err());
    let short = back_to_back(vec![10.0], 5_000, 1);
    assert!(run_link(&short, None).is_err());
}

#[test]
fn snr_at_ber_on_theory_curve() {
    let pts: Vec<_> = (0..=8)
        .map(|i| {
            let s = 8.0 + 0.5 * i as f64;
            subband_cdeq::link::BerPoint {
                snr_db: s,
                bits: 1,
                errors: 0,
                ber: theory_ber(s),
            }
        })
        .collect();
    let s = snr_at_ber(&pts, 1e-3).unwrap();
    assert!((s - 9.8).abs() < 0.05, "{s}");
}

#[test]
fn complexity_discrete_optimum() {
    let r = complexity_report(403, 32, 8);
    let nearest = 2f64.powi(r.m_opt.log2().round() as i32);
    let mut m = 8.0;
    while m <= 4096.0 {
        assert!(c_fb_iir(403, nearest, 8) <= c_fb_iir(403, m, 8));
        m *= 2.0;
    }
    // logarithmic growth: doubling N adds a constant at the optimum
    let a = complexity_report(403, 32, 8).c_opt;
    let b = complexity_report(806, 32, 8).c_opt;
    let c = complexity_report(1612, 32, 8).c_opt;
    assert!(((b - a) - 4.0).abs() < 1e-9 && ((c - b) - 4.0).abs() < 1e-9);
}
