//! Chromatic-dispersion (CD) equalization for coherent optical receivers.
//!
//! The equalizer splits the received signal with a 2x oversampled
//! (nonmaximally decimated) DFT filter bank and equalizes every sub-band
//! with a cascade of first-order complex all-pass sections. The toolkit
//! covers the whole chain:
//!
//! * [`channel`]: discrete-time CD channel `exp(-j·α·ω²)` and its sub-band images.
//! * [`allpass`]: first-order complex all-pass sections, cascades, streaming filters.
//! * [`filterbank`]: RRC prototype, polyphase analysis and synthesis banks.
//! * [`design`]: per-band group-delay targets, pole initialization and the
//!   multi-stage optimization that produces stable cascades.
//! * [`optim`]: the L-BFGS minimizer used by the design stages.
//! * [`link`]: QPSK Monte-Carlo link simulator and complexity model.

pub mod allpass;
pub mod channel;
pub mod design;
pub mod equalizer;
pub mod error;
pub mod filterbank;
pub mod link;
pub mod optim;
pub mod util;

pub use num_complex::Complex64;

pub use error::{Error, Result};
