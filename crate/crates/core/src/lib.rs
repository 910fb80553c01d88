//! Link-level simulation and exact BER analysis of dual-hop decode-and-forward
//! cooperative transmission with OSTBC at the source and opportunistic relay
//! selection over Rayleigh fading.
//!
//! The crate is organized bottom-up:
//!
//! - [`channel`]: seeded complex-Gaussian fading and noise generation.
//! - [`modem`]: Gray-labeled BPSK/QPSK/8-PSK/16-QAM mapping and ML demapping.
//! - [`ostbc`]: orthogonal space-time block encoding and linear combining.
//! - [`relayselect`]: per-relay path metrics and best-relay selection.
//! - [`analytic`]: SNR statistics and exact M-PSK BER by numerical integration.
//! - [`simulator`]: Monte Carlo engine producing BER points with Wilson intervals.
//! - [`config`] and [`cli`]: experiment files, CSV results and the `relaylink` binary.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod config;
mod error;
pub mod modem;
pub mod ostbc;
pub mod quadrature;
pub mod relayselect;
pub mod simulator;

pub use error::{Error, Result};

/// Complex baseband sample type used throughout the crate.
pub type Complex = num_complex::Complex64;
