//! Domain types for labeled vibration data, file ingestion, and a seeded
//! synthetic bearing-fault signal generator.

pub mod io;
mod synth;

pub use synth::{synth_record, ImpulseEstimate, SignatureClassifier, SpeedProfile, SynthConfig};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Bearing health state. Integer codes are stable: Normal=0, Outer=1,
/// Inner=2, Ball=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HealthState {
    Normal,
    Outer,
    Inner,
    Ball,
}

impl HealthState {
    pub const ALL: [HealthState; 4] = [
        HealthState::Normal,
        HealthState::Outer,
        HealthState::Inner,
        HealthState::Ball,
    ];

    pub const COUNT: usize = 4;

    pub fn code(self) -> usize {
        match self {
            HealthState::Normal => 0,
            HealthState::Outer => 1,
            HealthState::Inner => 2,
            HealthState::Ball => 3,
        }
    }

    pub fn from_code(code: usize) -> Result<Self> {
        Self::ALL
            .get(code)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("health-state code {code} out of range 0..3")))
    }

    pub fn name(self) -> &'static str {
        match self {
            HealthState::Normal => "normal",
            HealthState::Outer => "outer",
            HealthState::Inner => "inner",
            HealthState::Ball => "ball",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "normal" => Ok(HealthState::Normal),
            "outer" => Ok(HealthState::Outer),
            "inner" => Ok(HealthState::Inner),
            "ball" => Ok(HealthState::Ball),
            other => Err(Error::Invalid(format!("unknown health state '{other}'"))),
        }
    }
}

impl std::fmt::Display for HealthState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A two-channel raw vibration time series with its sampling rate and label.
///
/// Both channels always hold the same number of samples (N >= 1).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSensorRecord {
    channels: [Vec<f64>; 2],
    pub sample_rate_hz: f64,
    pub label: HealthState,
    pub source_id: String,
}

impl MultiSensorRecord {
    pub fn new(
        ch0: Vec<f64>,
        ch1: Vec<f64>,
        sample_rate_hz: f64,
        label: HealthState,
        source_id: impl Into<String>,
    ) -> Result<Self> {
        if ch0.len() != ch1.len() {
            return Err(Error::ChannelMismatch { ch0: ch0.len(), ch1: ch1.len() });
        }
        if ch0.is_empty() {
            return Err(Error::Invalid("record must contain at least one sample".into()));
        }
        if !(sample_rate_hz > 0.0) {
            return Err(Error::Config(format!("sample_rate_hz must be positive, got {sample_rate_hz}")));
        }
        Ok(Self { channels: [ch0, ch1], sample_rate_hz, label, source_id: source_id.into() })
    }

    /// Number of time samples per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, q: usize) -> &[f64] {
        &self.channels[q]
    }

    pub fn channels(&self) -> &[Vec<f64>; 2] {
        &self.channels
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.sample_rate_hz
    }

    /// Replace both channels, keeping metadata. Lengths must match.
    pub fn with_channels(&self, ch0: Vec<f64>, ch1: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        Self::new(ch0, ch1, sample_rate_hz, self.label, self.source_id.clone())
    }
}

/// Default plausible rpm band for [`SpeedTrace`] validation.
pub const DEFAULT_RPM_BAND: (f64, f64) = (0.0, 10_000.0);

/// Motor speed measurements over time; timestamps need not be uniform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedTrace {
    timestamps_s: Vec<f64>,
    rpm: Vec<f64>,
}

impl SpeedTrace {
    pub fn new(timestamps_s: Vec<f64>, rpm: Vec<f64>) -> Result<Self> {
        Self::with_band(timestamps_s, rpm, DEFAULT_RPM_BAND)
    }

    pub fn with_band(timestamps_s: Vec<f64>, rpm: Vec<f64>, band: (f64, f64)) -> Result<Self> {
        if timestamps_s.len() != rpm.len() {
            return Err(Error::Shape(format!(
                "speed trace has {} timestamps but {} rpm values",
                timestamps_s.len(),
                rpm.len()
            )));
        }
        if timestamps_s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("speed-trace timestamps must be strictly increasing".into()));
        }
        if let Some(bad) = rpm.iter().find(|&&r| !(r > band.0 && r <= band.1)) {
            return Err(Error::Invalid(format!(
                "rpm value {bad} outside plausible band ({}, {}]",
                band.0, band.1
            )));
        }
        Ok(Self { timestamps_s, rpm })
    }

    pub fn len(&self) -> usize {
        self.timestamps_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps_s.is_empty()
    }

    pub fn timestamps_s(&self) -> &[f64] {
        &self.timestamps_s
    }

    pub fn rpm(&self) -> &[f64] {
        &self.rpm
    }

    pub fn mean_rpm(&self) -> f64 {
        crate::util::mean(&self.rpm)
    }
}
