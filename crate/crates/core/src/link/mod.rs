//! QPSK link simulation and complexity accounting.

pub mod complexity;
pub mod config;
pub mod noise;
pub mod pulse;
pub mod qpsk;
pub mod sim;
pub mod sync;

pub use complexity::{c_fb_iir, c_iir, complexity_report, ComplexityReport};
pub use config::{EqualizerMode, LinkConfig};
pub use noise::{add_awgn, noise_variance};
pub use pulse::{matched_filter, rrc_pulse, shape_and_upsample};
pub use qpsk::{qpsk_demodulate, qpsk_modulate};
pub use sim::{
    build_equalizer, design_for, residual_sdr_db, run_link, snr_at_ber, theory_ber, BerPoint,
};
pub use sync::{synchronize, SyncResult};
