use std::process::Command;

fn cdeq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cdeq"))
}

#[test]
fn complexity_prints_report() {
    let out = cdeq().arg("complexity").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n_iir"], 403);
    assert_eq!(v["c_iir"], 1616.0);
    assert_eq!(v["c_fb_iir"], 279.5);
}

#[test]
fn simulate_requires_seed() {
    let out = cdeq()
        .args(["simulate", "--equalizer", "none"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn simulate_writes_csv_and_summary_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("link.toml");
    std::fs::write(
        &cfg,
        "length_km = 0.0\nequalizer = \"none\"\nn_symbols = 20000\nsnr_db = [6.0, 8.0]\n",
    )
    .unwrap();
    let csv = dir.path().join("ber.csv");
    let json = dir.path().join("summary.json");
    let status = cdeq()
        .args(["simulate", "--seed", "4", "--config"])
        .arg(&cfg)
        .arg("--csv")
        .arg(&csv)
        .arg("--json")
        .arg(&json)
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "snr_db,bits,errors,ber");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("6,38000,"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 4);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    // no fiber, so no full-band sections
    assert_eq!(v["complexity"]["n_iir"], 0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("link.toml");
    std::fs::write(
        &cfg,
        "length_km = 0.0\nequalizer = \"none\"\nn_symbols = 20000\nsnr_db = [6.0]\n",
    )
    .unwrap();
    let out = cdeq()
        .args(["simulate", "--seed", "1", "--snr-db", "20", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("20,38000,0,"));
}

#[test]
fn design_writes_loadable_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let status = cdeq()
        .args([
            "design",
            "--length-km",
            "300",
            "--bands",
            "16",
            "--grid-points",
            "1024",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let d = subband_cdeq::design::EqualizerDesign::load(&path).unwrap();
    assert_eq!(d.bands.len(), 16);
}

#[test]
fn fb_selftest_reports_and_sets_exit_code() {
    let out = cdeq()
        .args(["fb-selftest", "--length-factor", "16"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.contains("nmse") && text.contains("leakage"));
    let out = cdeq()
        .args(["fb-selftest", "--nmse-limit-db", "-60"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn bad_config_is_reported() {
    let out = cdeq()
        .args(["complexity", "--config", "/nonexistent/link.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = cdeq()
        .args(["simulate", "--seed", "1", "--oversampling", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
