//! Seeded synthetic bearing-fault signal generator.
//!
//! Produces two-channel vibration records that mimic a bearing test rig at
//! desk scale: every class shares a baseline of band-limited noise plus
//! shaft-harmonic tones, and the three fault classes add an impulse train at
//! a class-specific multiple of the instantaneous shaft frequency. Each
//! impulse excites an exponentially decaying sinusoid at the housing
//! resonance. Inter-impulse spacing tracks the time-varying speed profile.
//!
//! Fault classes carry the textbook amplitude-modulation signatures of real
//! bearings: inner-race impulses are modulated at the shaft frequency (the
//! defect rotates through the load zone), ball impulses at the cage
//! frequency, and outer-race impulses are unmodulated (the defect is fixed
//! in the load zone).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{HealthState, MultiSensorRecord, SpeedTrace};
use crate::{Error, Result};

/// Piecewise-linear shaft speed profile: rpm as a function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedProfile {
    /// `(time_s, rpm)` control points with strictly increasing times.
    points: Vec<(f64, f64)>,
}

impl SpeedProfile {
    pub fn constant(rpm: f64) -> Self {
        Self { points: vec![(0.0, rpm)] }
    }

    /// Linear ramp from `rpm_start` at t=0 to `rpm_end` at `t_end_s`.
    pub fn ramp(rpm_start: f64, rpm_end: f64, t_end_s: f64) -> Self {
        Self { points: vec![(0.0, rpm_start), (t_end_s, rpm_end)] }
    }

    pub fn piecewise(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("speed profile needs at least one control point".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("speed profile times must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Interpolated rpm at time `t` (clamped to the profile's ends).
    pub fn rpm_at(&self, t: f64) -> f64 {
        let pts = &self.points;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let (t0, r0) = w[0];
            let (t1, r1) = w[1];
            if t <= t1 {
                return r0 + (r1 - r0) * (t - t0) / (t1 - t0);
            }
        }
        pts[pts.len() - 1].1
    }

    fn min_rpm(&self) -> f64 {
        self.points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
    }
}

/// Configuration of the synthetic generator. One seed fixes all randomness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Outer-race impulse rate as a multiple of shaft frequency (BPFO-like).
    pub outer_rate: f64,
    /// Inner-race impulse rate as a multiple of shaft frequency (BPFI-like).
    pub inner_rate: f64,
    /// Ball impulse rate as a multiple of shaft frequency (2xBSF-like).
    pub ball_rate: f64,
    /// Housing resonance excited by each impulse, Hz.
    pub resonance_hz: f64,
    /// Exponential decay constant of the impulse ring, 1/s.
    pub resonance_decay: f64,
    /// Mean impulse amplitude; individual impulses vary +/-20%.
    pub impulse_amp: f64,
    /// Standard deviation of the baseline noise floor.
    pub base_noise: f64,
    /// Amplitude scale of the shaft-harmonic tones present in every class.
    pub tone_amp: f64,
    /// Shaft speed over time.
    pub speed_profile: SpeedProfile,
    pub duration_s: f64,
    pub sample_rate_hz: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            outer_rate: 3.05,
            inner_rate: 4.95,
            ball_rate: 1.99,
            resonance_hz: 3_000.0,
            resonance_decay: 600.0,
            impulse_amp: 1.0,
            base_noise: 0.05,
            tone_amp: 0.4,
            speed_profile: SpeedProfile::constant(1_200.0),
            duration_s: 2.0,
            sample_rate_hz: 20_000.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s > 0.0) {
            return Err(Error::Config(format!("duration_s must be positive, got {}", self.duration_s)));
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(Error::Config("sample_rate_hz must be positive".into()));
        }
        for (name, rate) in [
            ("outer_rate", self.outer_rate),
            ("inner_rate", self.inner_rate),
            ("ball_rate", self.ball_rate),
        ] {
            if !(rate > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {rate}")));
            }
        }
        if !(self.resonance_hz > 0.0 && self.resonance_hz < self.sample_rate_hz / 2.0) {
            return Err(Error::Config(format!(
                "resonance_hz {} must lie below Nyquist {}",
                self.resonance_hz,
                self.sample_rate_hz / 2.0
            )));
        }
        if !(self.resonance_decay > 0.0) {
            return Err(Error::Config("resonance_decay must be positive".into()));
        }
        if self.speed_profile.min_rpm() <= 0.0 {
            return Err(Error::Config("speed profile rpm must stay positive".into()));
        }
        Ok(())
    }

    /// Impulse rate multiple for a fault class; `None` for `Normal`.
    pub fn rate_for(&self, label: HealthState) -> Option<f64> {
        match label {
            HealthState::Normal => None,
            HealthState::Outer => Some(self.outer_rate),
            HealthState::Inner => Some(self.inner_rate),
            HealthState::Ball => Some(self.ball_rate),
        }
    }
}

// RNG stream ids; fixed so generated byte streams depend only on the seed.
const STREAM_NOISE_CH0: u64 = 10;
const STREAM_NOISE_CH1: u64 = 11;
const STREAM_TONE_PHASES: u64 = 20;
const STREAM_IMPULSES: u64 = 21;

// Per-channel mixing gains; the two accelerometers see the same sources with
// different transfer paths.
const TONE1_GAIN: [f64; 2] = [1.0, 0.7];
const TONE2_GAIN: [f64; 2] = [0.6, 0.9];
const IMPULSE_GAIN: [f64; 2] = [1.0, 0.75];

/// Interval between speed-trace samples (12.5 Hz acquisition).
const SPEED_TRACE_DT: f64 = 0.08;

/// Generate a labeled two-channel record and the matching speed trace.
///
/// Deterministic: equal `(cfg, label)` pairs produce bit-identical output.
pub fn synth_record(cfg: &SynthConfig, label: HealthState) -> Result<(MultiSensorRecord, SpeedTrace)> {
    cfg.validate()?;
    let fs = cfg.sample_rate_hz;
    let dt = 1.0 / fs;
    let n = (cfg.duration_s * fs).round().max(1.0) as usize;

    // Shaft phase by trapezoidal integration; exact for piecewise-linear rpm.
    let mut shaft_phase = vec![0.0f64; n];
    for i in 1..n {
        let f0 = cfg.speed_profile.rpm_at((i - 1) as f64 * dt) / 60.0;
        let f1 = cfg.speed_profile.rpm_at(i as f64 * dt) / 60.0;
        shaft_phase[i] = shaft_phase[i - 1] + PI * (f0 + f1) * dt;
    }

    let mut phase_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    phase_rng.set_stream(STREAM_TONE_PHASES);
    let tone_phases: Vec<f64> = (0..4).map(|_| phase_rng.gen::<f64>() * 2.0 * PI).collect();

    let mut channels: [Vec<f64>; 2] = [vec![0.0; n], vec![0.0; n]];
    for q in 0..2 {
        let mut noise_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        noise_rng.set_stream(if q == 0 { STREAM_NOISE_CH0 } else { STREAM_NOISE_CH1 });
        let ch = &mut channels[q];
        for (i, sample) in ch.iter_mut().enumerate() {
            let phi = shaft_phase[i];
            let tones = cfg.tone_amp
                * (TONE1_GAIN[q] * (phi + tone_phases[2 * q]).sin()
                    + TONE2_GAIN[q] * (2.0 * phi + tone_phases[2 * q + 1]).sin());
            let noise: f64 = noise_rng.sample(StandardNormal);
            *sample = tones + cfg.base_noise * noise;
        }
    }

    if let Some(rate) = cfg.rate_for(label) {
        add_impulse_train(cfg, label, rate, &shaft_phase, &mut channels);
    }

    // Speed trace sampled at 12.5 Hz, the acquisition rate of the rig's
    // tachometer channel.
    let mut ts = Vec::new();
    let mut rpm = Vec::new();
    let mut t = 0.0;
    while t < cfg.duration_s {
        ts.push(t);
        rpm.push(cfg.speed_profile.rpm_at(t));
        t += SPEED_TRACE_DT;
    }
    if ts.len() < 2 {
        ts.push(cfg.duration_s);
        rpm.push(cfg.speed_profile.rpm_at(cfg.duration_s));
    }
    let trace = SpeedTrace::new(ts, rpm)?;

    let [ch0, ch1] = channels;
    let source_id = format!("synth_{}_{:016x}", label.name(), cfg.seed);
    let record = MultiSensorRecord::new(ch0, ch1, fs, label, source_id)?;
    Ok((record, trace))
}

fn add_impulse_train(
    cfg: &SynthConfig,
    label: HealthState,
    rate: f64,
    shaft_phase: &[f64],
    channels: &mut [Vec<f64>; 2],
) {
    let n = shaft_phase.len();
    let fs = cfg.sample_rate_hz;
    let dt = 1.0 / fs;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(STREAM_IMPULSES);

    // Ring until the envelope has decayed to 1e-4 of its peak.
    let ring_len = ((9.21 / cfg.resonance_decay) * fs).ceil() as usize;

    // Fault cycles completed: one impulse per integer crossing.
    let fault_cycles = |i: usize| rate * shaft_phase[i] / (2.0 * PI);
    for i in 1..n {
        let c0 = fault_cycles(i - 1);
        let c1 = fault_cycles(i);
        if c1.floor() <= c0.floor() && c0 != 0.0 {
            continue;
        }
        let mut m = c0.floor() + 1.0;
        if c0 == 0.0 && i == 1 {
            m = 0.0; // fire the first impulse at phase zero
        }
        while m <= c1 {
            let frac = if c1 > c0 { (m - c0) / (c1 - c0) } else { 0.0 };
            let t_event = ((i - 1) as f64 + frac) * dt;
            let phi_event = shaft_phase[i - 1] + frac * (shaft_phase[i] - shaft_phase[i - 1]);

            let jitter: f64 = 0.8 + 0.4 * rng.gen::<f64>(); // +/-20% amplitude spread
            let modulation = match label {
                HealthState::Inner => 1.0 + 0.8 * phi_event.cos(),
                HealthState::Ball => 1.0 + 0.8 * (0.4 * phi_event).cos(),
                _ => 1.0,
            };
            let amp = cfg.impulse_amp * jitter * modulation;

            let start = (t_event / dt).ceil() as usize;
            let end = (start + ring_len).min(n);
            for (q, ch) in channels.iter_mut().enumerate() {
                let gain = IMPULSE_GAIN[q] * amp;
                for (idx, sample) in ch[start..end].iter_mut().enumerate() {
                    let tr = (start + idx) as f64 * dt - t_event;
                    *sample += gain * (-cfg.resonance_decay * tr).exp() * (2.0 * PI * cfg.resonance_hz * tr).sin();
                }
            }
            m += 1.0;
        }
    }
}

/// Impulse events detected by complex demodulation at the resonance
/// frequency. Independent of the CNN path; used as a sanity oracle for the
/// generator and as a classical baseline.
#[derive(Debug, Clone)]
pub struct ImpulseEstimate {
    pub event_times_s: Vec<f64>,
    /// Mean spacing of consecutive events, if two or more were found.
    pub mean_spacing_s: Option<f64>,
    /// Median spacing; robust to occasional missed impulses.
    pub median_spacing_s: Option<f64>,
}

impl ImpulseEstimate {
    pub fn count(&self) -> usize {
        self.event_times_s.len()
    }

    /// Events per second from the median spacing.
    pub fn rate_hz(&self) -> Option<f64> {
        self.median_spacing_s.map(|s| 1.0 / s)
    }
}

/// Detect impulse events in one channel by measuring the signal's energy at
/// the resonance frequency: complex demodulation followed by a moving
/// average, thresholded at a multiple of the median envelope.
pub fn detect_impulses(
    channel: &[f64],
    sample_rate_hz: f64,
    resonance_hz: f64,
    threshold_factor: f64,
) -> ImpulseEstimate {
    let n = channel.len();
    let window = ((sample_rate_hz * 0.0015).round() as usize).clamp(4, 64);
    if n < window * 2 {
        return ImpulseEstimate { event_times_s: Vec::new(), mean_spacing_s: None, median_spacing_s: None };
    }

    // Demodulate at the resonance frequency and average over ~1.5 ms.
    let omega = 2.0 * PI * resonance_hz / sample_rate_hz;
    let demod: Vec<(f64, f64)> = channel
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let ang = omega * i as f64;
            (x * ang.cos(), -x * ang.sin())
        })
        .collect();
    let mut env = Vec::with_capacity(n - window);
    let mut acc_re: f64 = demod[..window].iter().map(|d| d.0).sum();
    let mut acc_im: f64 = demod[..window].iter().map(|d| d.1).sum();
    env.push((acc_re * acc_re + acc_im * acc_im).sqrt() / window as f64);
    for i in window..n {
        acc_re += demod[i].0 - demod[i - window].0;
        acc_im += demod[i].1 - demod[i - window].1;
        env.push((acc_re * acc_re + acc_im * acc_im).sqrt() / window as f64);
    }

    let threshold = crate::util::median(&env) * threshold_factor;
    let min_gap = window; // below-threshold samples required between events

    let mut events = Vec::new();
    let mut below_run = min_gap;
    let mut in_event = false;
    let mut peak = 0.0f64;
    let mut peak_idx = 0usize;
    for (i, &e) in env.iter().enumerate() {
        if e > threshold {
            if !in_event && below_run >= min_gap {
                in_event = true;
                peak = e;
                peak_idx = i;
            } else if in_event && e > peak {
                peak = e;
                peak_idx = i;
            }
            below_run = 0;
        } else {
            below_run += 1;
            if in_event && below_run >= min_gap {
                events.push(peak_idx as f64 / sample_rate_hz);
                in_event = false;
            }
        }
    }
    if in_event {
        events.push(peak_idx as f64 / sample_rate_hz);
    }

    let spacings: Vec<f64> = events.windows(2).map(|w| w[1] - w[0]).collect();
    let mean_spacing_s = if spacings.is_empty() { None } else { Some(crate::util::mean(&spacings)) };
    let median_spacing_s = if spacings.is_empty() { None } else { Some(crate::util::median(&spacings)) };
    ImpulseEstimate { event_times_s: events, mean_spacing_s, median_spacing_s }
}

/// Classical classifier combining resonance-band energy events with the
/// impulse-rate-to-shaft-frequency ratio. Serves as a CNN-independent check
/// that generated data is separable by construction.
#[derive(Debug, Clone)]
pub struct SignatureClassifier {
    pub outer_rate: f64,
    pub inner_rate: f64,
    pub ball_rate: f64,
    pub resonance_hz: f64,
    pub threshold_factor: f64,
}

impl SignatureClassifier {
    pub fn from_config(cfg: &SynthConfig) -> Self {
        Self {
            outer_rate: cfg.outer_rate,
            inner_rate: cfg.inner_rate,
            ball_rate: cfg.ball_rate,
            resonance_hz: cfg.resonance_hz,
            threshold_factor: 4.0,
        }
    }

    pub fn classify(&self, record: &MultiSensorRecord, trace: &SpeedTrace) -> HealthState {
        let est = detect_impulses(
            record.channel(0),
            record.sample_rate_hz,
            self.resonance_hz,
            self.threshold_factor,
        );
        let shaft_hz = trace.mean_rpm() / 60.0;
        let duration = record.duration_s();
        let min_fault_rate = self.ball_rate.min(self.outer_rate).min(self.inner_rate) * shaft_hz;

        let gross_rate = est.count() as f64 / duration;
        if gross_rate < 0.45 * min_fault_rate {
            return HealthState::Normal;
        }
        let ratio = match est.rate_hz() {
            Some(rate) => rate / shaft_hz,
            None => return HealthState::Normal,
        };
        let candidates = [
            (HealthState::Outer, self.outer_rate),
            (HealthState::Inner, self.inner_rate),
            (HealthState::Ball, self.ball_rate),
        ];
        candidates
            .iter()
            .min_by(|a, b| (ratio - a.1).abs().partial_cmp(&(ratio - b.1).abs()).unwrap())
            .unwrap()
            .0
    }
}
