//! Vibration-based rolling-element bearing fault diagnosis.
//!
//! The crate covers the full diagnostic pipeline for two-channel
//! accelerometer recordings under time-varying shaft speeds:
//!
//! - [`signals`] — labeled vibration records, file ingestion, and a seeded
//!   synthetic bearing-fault generator for desk-scale experiments.
//! - [`dsp`] — preprocessing: rational resampling, SNR-calibrated noise
//!   injection, segmentation, per-segment standardization, smoothed PSD
//!   estimation, and a nonuniform Fourier transform for speed traces.
//! - [`model`] — a compact 1-D CNN (five conv blocks, dense head) with
//!   forward/backward passes and Adam updates, implemented from scratch.
//! - [`training`] — stratified k-fold cross-validation and the two-phase
//!   learning-rate schedule.
//! - [`ssa`] — Fisher-based spectral separability analysis: per-class PSD
//!   statistics, pairwise Fisher curves, and separable-band extraction.
//! - [`eval`] — confusion matrices, macro-averaged one-vs-all metrics, and
//!   a single-segment inference latency benchmark.
//! - [`cli`] — command implementations behind the `vibdiag` binary, with
//!   reproducible run manifests.
//!
//! See the crate `examples/` directory for one runnable example per
//! capability; `vibdiag --help` lists the command-line surface.

pub mod cli;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod model;
pub mod signals;
pub mod ssa;
pub mod training;
pub(crate) mod util;

pub use error::{Error, Result};
