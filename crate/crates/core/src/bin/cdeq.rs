//! `cdeq`: design, simulate and inspect sub-band all-pass CD equalizers.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use subband_cdeq::design::{EqualizerDesign, WeightKind};
use subband_cdeq::filterbank::{
    band_leakage_db, cascade_delay, design_rrc, reconstruction_nmse_db,
};
use subband_cdeq::link::{
    complexity_report, design_for, run_link, snr_at_ber, theory_ber, EqualizerMode, LinkConfig,
};

#[derive(Parser)]
#[command(
    name = "cdeq",
    version,
    about = "Sub-band all-pass chromatic-dispersion equalizer toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design the equalizer and write the coefficient file.
    Design {
        #[command(flatten)]
        link: LinkArgs,
        /// Coefficient file to write.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the Monte-Carlo BER simulation.
    Simulate {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long)]
        seed: u64,
        /// Use this coefficient file instead of designing.
        #[arg(long)]
        coefficients: Option<PathBuf>,
        /// BER curve as CSV (stdout if omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON summary.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the multiplication counts.
    Complexity {
        #[command(flatten)]
        link: LinkArgs,
        /// Full-band order; derived from the channel when omitted.
        #[arg(long)]
        n_iir: Option<usize>,
    },
    /// Check near-perfect reconstruction and band centring of the filter bank.
    FbSelftest {
        #[command(flatten)]
        link: LinkArgs,
        /// NMSE threshold in dB.
        #[arg(long, default_value_t = -30.0)]
        nmse_limit_db: f64,
        /// Minimum non-adjacent band rejection in dB.
        #[arg(long, default_value_t = 40.0)]
        leakage_limit_db: f64,
    },
}

/// Every link setting; flags override the config file, which overrides defaults.
#[derive(Args)]
struct LinkArgs {
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    baud: Option<f64>,
    #[arg(long)]
    oversampling: Option<usize>,
    #[arg(long)]
    lambda0_nm: Option<f64>,
    #[arg(long)]
    dispersion_ps_nm_km: Option<f64>,
    #[arg(long)]
    length_km: Option<f64>,
    #[arg(long)]
    bands: Option<usize>,
    #[arg(long)]
    length_factor: Option<usize>,
    #[arg(long)]
    prototype_roll_off: Option<f64>,
    /// uniform | rc_squared
    #[arg(long, value_parser = parse_weight_kind)]
    weight_kind: Option<WeightKind>,
    #[arg(long)]
    weight_cutoff_pi: Option<f64>,
    #[arg(long)]
    weight_roll_off: Option<f64>,
    #[arg(long)]
    fullband_cutoff_pi: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    fullband_grid_points: Option<usize>,
    #[arg(long)]
    tx_roll_off: Option<f64>,
    /// none | fullband_iir | fb_iir
    #[arg(long)]
    equalizer: Option<EqualizerMode>,
    /// Comma-separated Es/N0 values in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Option<Vec<f64>>,
    #[arg(long)]
    n_symbols: Option<usize>,
    #[arg(long)]
    n_pilots: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    gradient_tolerance: Option<f64>,
}

fn parse_weight_kind(s: &str) -> Result<WeightKind, String> {
    match s {
        "uniform" => Ok(WeightKind::Uniform),
        "rc_squared" => Ok(WeightKind::RcSquared),
        _ => Err(format!("unknown weighting `{s}`")),
    }
}

macro_rules! overlay {
    ($cfg:ident, $args:ident, $($field:ident),*) => {
        $(if let Some(v) = $args.$field.clone() { $cfg.$field = v; })*
    };
}

impl LinkArgs {
    fn resolve(&self) -> subband_cdeq::Result<LinkConfig> {
        let mut cfg = match &self.config {
            Some(path) => LinkConfig::from_file(path)?,
            None => LinkConfig::default(),
        };
        overlay!(
            cfg,
            self,
            baud,
            oversampling,
            lambda0_nm,
            dispersion_ps_nm_km,
            length_km,
            bands,
            length_factor,
            prototype_roll_off,
            weight_kind,
            weight_cutoff_pi,
            weight_roll_off,
            fullband_cutoff_pi,
            grid_points,
            fullband_grid_points,
            tx_roll_off,
            equalizer,
            snr_db,
            n_symbols,
            n_pilots,
            max_iterations,
            gradient_tolerance
        );
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn band_summary(design: &EqualizerDesign) -> serde_json::Value {
    design
        .bands
        .iter()
        .map(|b| {
            json!({
                "band": b.report.band,
                "n_sections": b.spec.n_sections,
                "beta_prime": b.spec.beta_prime,
                "gd_cost_init": b.report.gd_cost_init,
                "gd_cost_final": b.report.gd_cost_final,
                "phase_cost_entry": b.report.phase_cost_joint_entry,
                "phase_cost_final": b.report.phase_cost_final,
            })
        })
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Design { link, out } => {
            let cfg = link.resolve()?;
            let Some(design) = design_for(&cfg)? else {
                return Err("equalizer mode `none` has nothing to design".into());
            };
            design.save(&out)?;
            eprintln!(
                "wrote {} ({} bands, {} sections)",
                out.display(),
                design.bands.len(),
                design.total_sections()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            link,
            seed,
            coefficients,
            csv,
            json: json_path,
        } => {
            let mut cfg = link.resolve()?;
            cfg.seed = seed;
            cfg.validate_for_ber()?;
            let design = match (&coefficients, cfg.equalizer) {
                (_, EqualizerMode::None) => None,
                (Some(path), _) => Some(EqualizerDesign::load(path)?),
                (None, _) => design_for(&cfg)?,
            };
            let points = run_link(&cfg, design.as_ref())?;

            let mut table = String::from("snr_db,bits,errors,ber\n");
            for p in &points {
                table.push_str(&format!(
                    "{},{},{},{:e}\n",
                    p.snr_db, p.bits, p.errors, p.ber
                ));
            }
            match &csv {
                Some(path) => std::fs::write(path, &table)?,
                None => std::io::stdout().write_all(table.as_bytes())?,
            }
            if let Some(path) = json_path {
                let channel = cfg.channel()?;
                let n_iir = subband_cdeq::design::fullband_spec(channel.alpha)?.n_sections;
                let summary = json!({
                    "config": cfg,
                    "alpha": channel.alpha,
                    "complexity": complexity_report(n_iir, cfg.bands, cfg.length_factor),
                    "design": design.as_ref().map(band_summary),
                    "points": points,
                    "snr_at_ber_1e-3": snr_at_ber(&points, 1e-3),
                    "theory_ber": cfg.snr_db.iter().map(|&s| theory_ber(s)).collect::<Vec<_>>(),
                });
                std::fs::write(path, serde_json::to_string_pretty(&summary)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Complexity { link, n_iir } => {
            let cfg = link.resolve()?;
            let n_iir = match n_iir {
                Some(n) => n,
                None => subband_cdeq::design::fullband_spec(cfg.channel()?.alpha)?.n_sections,
            };
            let report = complexity_report(n_iir, cfg.bands, cfg.length_factor);
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::FbSelftest {
            link,
            nmse_limit_db,
            leakage_limit_db,
        } => {
            let cfg = link.resolve()?;
            let proto = design_rrc(cfg.bands, cfg.length_factor, cfg.prototype_roll_off)?;
            let delay = cascade_delay(&proto.config, &proto)?;
            let nmse = reconstruction_nmse_db(&proto, 1 << 15, cfg.seed)?;
            let leakage = (0..cfg.bands)
                .map(|k| band_leakage_db(&proto, k))
                .collect::<subband_cdeq::Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let nmse_ok = nmse <= nmse_limit_db;
            let leak_ok = leakage >= leakage_limit_db;
            let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
            println!("delay      {delay} samples");
            println!(
                "nmse       {nmse:.2} dB (limit {nmse_limit_db} dB) {}",
                verdict(nmse_ok)
            );
            println!(
                "leakage    {leakage:.2} dB (limit {leakage_limit_db} dB) {}",
                verdict(leak_ok)
            );
            Ok(if nmse_ok && leak_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
