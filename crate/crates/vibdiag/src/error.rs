//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any stage of the diagnosis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("channel length mismatch: channel 0 has {ch0} samples, channel 1 has {ch1}")]
    ChannelMismatch { ch0: usize, ch1: usize },

    #[error("unknown ingestion layout: {0}")]
    UnknownLayout(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("record too short: {n} samples with segment length {l}")]
    RecordTooShort { n: usize, l: usize },

    #[error("segment {segment} has zero variance; cannot standardize")]
    ZeroVariance { segment: usize },

    #[error("resampling ratio {from_hz} Hz -> {to_hz} Hz is not representable as p/q with p,q <= {limit}")]
    NotRational { from_hz: f64, to_hz: f64, limit: u32 },

    #[error("non-finite {what} at epoch {epoch}, batch {batch}")]
    NonFinite { what: String, epoch: usize, batch: usize },

    #[error("non-finite gradients passed to optimizer step")]
    NonFiniteGradient,

    #[error("checkpoint error in {path}: {message}")]
    Checkpoint { path: String, message: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }
}
