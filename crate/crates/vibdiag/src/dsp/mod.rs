//! Signal preprocessing: resampling, SNR-calibrated noise injection,
//! segmentation, standardization, smoothed PSD estimation, and nonuniform
//! Fourier analysis of speed traces.

mod resample;
mod spectral;

pub use resample::resample;
pub use spectral::{gaussian_smooth, gaussian_window, nuft_psd, power_fraction_below, smoothed_psd};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::signals::{HealthState, MultiSensorRecord};
use crate::{Error, Result};

/// Target signal-to-noise ratio for noise injection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Snr {
    /// No noise added; the record passes through unchanged.
    Clean,
    /// Additive white Gaussian noise calibrated to this SNR in dB.
    Db(f64),
}

impl std::fmt::Display for Snr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Snr::Clean => write!(f, "clean"),
            Snr::Db(db) => write!(f, "{db}dB"),
        }
    }
}

impl std::str::FromStr for Snr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("clean") {
            return Ok(Snr::Clean);
        }
        let t = t.trim_end_matches("dB").trim_end_matches("db");
        t.parse::<f64>()
            .map(Snr::Db)
            .map_err(|_| Error::Invalid(format!("cannot parse SNR '{s}' (expected a dB value or 'clean')")))
    }
}

/// Noise injection specification; the seed fixes the noise realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub snr: Snr,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn clean() -> Self {
        Self { snr: Snr::Clean, seed: 0 }
    }

    pub fn db(snr_db: f64, seed: u64) -> Self {
        Self { snr: Snr::Db(snr_db), seed }
    }
}

/// Scale factor for white noise that hits `snr_db` against the channel's
/// mean power: `sqrt(10^(-SNR/10) * mean(s^2))`.
///
/// An all-zero channel yields zero (noise relative to a null signal is
/// meaningless); a warning is logged in that case.
pub fn noise_scale_for_snr(channel: &[f64], snr_db: f64) -> f64 {
    assert!(!channel.is_empty(), "noise_scale_for_snr requires a nonempty channel");
    let mean_power = channel.iter().map(|s| s * s).sum::<f64>() / channel.len() as f64;
    if mean_power == 0.0 {
        log::warn!("noise_scale_for_snr: all-zero channel, returning alpha = 0");
        return 0.0;
    }
    (10f64.powf(-snr_db / 10.0) * mean_power).sqrt()
}

/// Add seeded white Gaussian noise at the requested SNR, per channel.
///
/// Each channel gets an independent noise stream derived from
/// `(spec.seed, channel index)`, so the two sensors' noises are i.i.d.
/// `Snr::Clean` returns the input unchanged.
pub fn add_noise(record: &MultiSensorRecord, spec: &NoiseSpec) -> MultiSensorRecord {
    let snr_db = match spec.snr {
        Snr::Clean => return record.clone(),
        Snr::Db(db) => db,
    };
    let n = record.len();
    let mut out: [Vec<f64>; 2] = [Vec::with_capacity(n), Vec::with_capacity(n)];
    for q in 0..2 {
        let alpha = noise_scale_for_snr(record.channel(q), snr_db);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(q as u64);
        out[q].extend(record.channel(q).iter().map(|&s| {
            let eta: f64 = StandardNormal.sample(&mut rng);
            s + alpha * eta
        }));
    }
    let [ch0, ch1] = out;
    record
        .with_channels(ch0, ch1, record.sample_rate_hz)
        .expect("noise injection preserves channel lengths")
}

/// Segmented (and optionally standardized) two-channel signal: a 2 x P x L
/// tensor stored segment-major so each segment is one contiguous 2L slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTensor {
    data: Vec<f64>, // layout: [segment][channel][sample]
    segments: usize,
    segment_len: usize,
    pub sample_rate_hz: f64,
    pub standardized: bool,
    pub label: HealthState,
    pub source_id: String,
}

impl SegmentTensor {
    /// Logical shape `(channels, P, L)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (2, self.segments, self.segment_len)
    }

    pub fn num_segments(&self) -> usize {
        self.segments
    }

    pub fn segment_len(&self) -> usize {
        self.segment_len
    }

    /// Flattened 2L view of segment `p`: channel 0 then channel 1.
    pub fn segment(&self, p: usize) -> &[f64] {
        let stride = 2 * self.segment_len;
        &self.data[p * stride..(p + 1) * stride]
    }

    /// Channel `q` of segment `p` as an L-sample slice.
    pub fn segment_channel(&self, p: usize, q: usize) -> &[f64] {
        let stride = 2 * self.segment_len;
        let base = p * stride + q * self.segment_len;
        &self.data[base..base + self.segment_len]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn from_raw(
        data: Vec<f64>,
        segment_len: usize,
        sample_rate_hz: f64,
        standardized: bool,
        label: HealthState,
        source_id: impl Into<String>,
    ) -> Result<Self> {
        if segment_len == 0 || data.is_empty() || data.len() % (2 * segment_len) != 0 {
            return Err(Error::Shape(format!(
                "tensor data length {} is not a multiple of 2 x segment length {}",
                data.len(),
                segment_len
            )));
        }
        let segments = data.len() / (2 * segment_len);
        Ok(Self { data, segments, segment_len, sample_rate_hz, standardized, label, source_id: source_id.into() })
    }
}

/// Number of non-overlapping length-`l` segments in an `n`-sample record.
pub fn segment_count(n: usize, l: usize) -> usize {
    n / l
}

/// Split a record into non-overlapping segments of length `l`.
///
/// Segment `p` (1-based) covers samples `l*(p-1)+1 ..= l*p`; a trailing
/// remainder shorter than `l` is discarded. Errors if the record is shorter
/// than one segment.
pub fn segment(record: &MultiSensorRecord, l: usize) -> Result<SegmentTensor> {
    if l == 0 {
        return Err(Error::Config("segment length must be positive".into()));
    }
    let n = record.len();
    if n < l {
        return Err(Error::RecordTooShort { n, l });
    }
    let p = segment_count(n, l);
    let mut data = Vec::with_capacity(p * 2 * l);
    for seg in 0..p {
        let start = seg * l;
        for q in 0..2 {
            data.extend_from_slice(&record.channel(q)[start..start + l]);
        }
    }
    SegmentTensor::from_raw(data, l, record.sample_rate_hz, false, record.label, record.source_id.clone())
}

/// Z-score standardization per segment over the flattened 2L values of both
/// channels (population standard deviation, divisor 2L).
pub fn standardize(tensor: SegmentTensor) -> Result<SegmentTensor> {
    if tensor.standardized {
        return Err(Error::Invalid("tensor is already standardized".into()));
    }
    let SegmentTensor { mut data, segments, segment_len, sample_rate_hz, label, source_id, .. } = tensor;
    let stride = 2 * segment_len;
    for p in 0..segments {
        let seg = &mut data[p * stride..(p + 1) * stride];
        let mean = seg.iter().sum::<f64>() / stride as f64;
        let var = seg.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / stride as f64;
        if var == 0.0 {
            return Err(Error::ZeroVariance { segment: p });
        }
        let std = var.sqrt();
        for v in seg.iter_mut() {
            *v = (*v - mean) / std;
        }
    }
    SegmentTensor::from_raw(data, segment_len, sample_rate_hz, true, label, source_id)
}

/// Segment length whose duration equals one period of `f_max_hz`:
/// `round(sample_rate_hz / f_max_hz)`.
pub fn segment_length_for_rate(f_max_hz: f64, sample_rate_hz: f64) -> usize {
    assert!(f_max_hz > 0.0 && sample_rate_hz > 0.0, "rates must be positive");
    (sample_rate_hz / f_max_hz).round() as usize
}

/// A one-sided power spectral density curve in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdCurve {
    frequencies_hz: Vec<f64>,
    power_db: Vec<f64>,
}

impl PsdCurve {
    pub fn new(frequencies_hz: Vec<f64>, power_db: Vec<f64>) -> Result<Self> {
        if frequencies_hz.len() != power_db.len() {
            return Err(Error::Shape(format!(
                "psd has {} frequencies but {} power values",
                frequencies_hz.len(),
                power_db.len()
            )));
        }
        if frequencies_hz.first().is_some_and(|&f| f < 0.0)
            || frequencies_hz.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Invalid("psd frequencies must be nonnegative and strictly increasing".into()));
        }
        Ok(Self { frequencies_hz, power_db })
    }

    pub fn len(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies_hz.is_empty()
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn power_db(&self) -> &[f64] {
        &self.power_db
    }

    /// Linear-power view of the curve.
    pub fn power_linear(&self) -> Vec<f64> {
        self.power_db.iter().map(|db| 10f64.powf(db / 10.0)).collect()
    }

    /// Frequency of the maximum-power bin.
    pub fn peak_frequency_hz(&self) -> Option<f64> {
        self.power_db
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| self.frequencies_hz[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{HealthState, MultiSensorRecord};
    use proptest::prelude::*;

    fn record_of(ch0: Vec<f64>, ch1: Vec<f64>, fs: f64) -> MultiSensorRecord {
        MultiSensorRecord::new(ch0, ch1, fs, HealthState::Normal, "test").unwrap()
    }

    #[test]
    fn alpha_for_unit_power_at_0db_is_one() {
        let channel = vec![1.0; 64];
        assert!((noise_scale_for_snr(&channel, 0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_for_unit_power_at_20db_is_tenth() {
        let channel = vec![1.0, -1.0, 1.0, -1.0];
        assert!((noise_scale_for_snr(&channel, 20.0) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn alpha_hand_example() {
        // mean power of [3,4] is 12.5; at 10 dB alpha = sqrt(1.25).
        let alpha = noise_scale_for_snr(&[3.0, 4.0], 10.0);
        assert!((alpha - 1.25f64.sqrt()).abs() < 1e-9);
        assert!((alpha - 1.118034).abs() < 1e-6);
    }

    #[test]
    fn alpha_zero_channel_is_zero() {
        assert_eq!(noise_scale_for_snr(&[0.0, 0.0, 0.0], 10.0), 0.0);
    }

    #[test]
    fn clean_noise_is_identity() {
        let rec = record_of(vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], 100.0);
        let out = add_noise(&rec, &NoiseSpec::clean());
        assert_eq!(rec, out);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let rec = record_of(vec![1.0; 256], vec![2.0; 256], 100.0);
        let a = add_noise(&rec, &NoiseSpec::db(5.0, 42));
        let b = add_noise(&rec, &NoiseSpec::db(5.0, 42));
        assert_eq!(a, b);
        let c = add_noise(&rec, &NoiseSpec::db(5.0, 43));
        assert_ne!(a.channel(0), c.channel(0));
        // Channels draw from independent streams.
        let delta0: Vec<f64> = a.channel(0).iter().map(|v| v - 1.0).collect();
        let delta1: Vec<f64> = a.channel(1).iter().map(|v| v - 2.0).collect();
        assert_ne!(delta0, delta1);
    }

    #[test]
    fn empirical_snr_matches_requested_within_tenth_db() {
        // The added-noise power ratio must land within +/-0.1 dB at N=1e6.
        let n = 1_000_000;
        let signal: Vec<f64> = (0..n).map(|i| (i as f64 * 0.01).sin() * std::f64::consts::SQRT_2).collect();
        let rec = record_of(signal.clone(), signal.clone(), 1000.0);
        let noisy = add_noise(&rec, &NoiseSpec::db(0.0, 7));
        let p_signal = signal.iter().map(|s| s * s).sum::<f64>() / n as f64;
        let p_noise = noisy
            .channel(0)
            .iter()
            .zip(&signal)
            .map(|(x, s)| (x - s) * (x - s))
            .sum::<f64>()
            / n as f64;
        let measured = 10.0 * (p_signal / p_noise).log10();
        assert!(measured.abs() < 0.1, "measured SNR {measured} dB, requested 0 dB");
    }

    #[test]
    fn segment_counts_follow_floor_rule() {
        assert_eq!(segment_count(42_000_000, 2000), 21_000);
        assert_eq!(segment_count(4000, 2000), 2);
        assert_eq!(segment_count(4100, 2000), 2);
    }

    #[test]
    fn segment_two_segments_and_offsets() {
        let n = 4000;
        let ch: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let rec = record_of(ch.clone(), ch.iter().map(|v| -v).collect(), 100.0);
        let t = segment(&rec, 2000).unwrap();
        assert_eq!(t.shape(), (2, 2, 2000));
        // Second segment begins at sample index 2000 (1-based: 2001).
        assert_eq!(t.segment_channel(1, 0)[0], 2000.0);
        assert_eq!(t.segment_channel(0, 1)[0], -0.0);
    }

    #[test]
    fn segment_discards_remainder() {
        let ch: Vec<f64> = (0..4100).map(|i| i as f64).collect();
        let rec = record_of(ch.clone(), ch, 100.0);
        let t = segment(&rec, 2000).unwrap();
        assert_eq!(t.num_segments(), 2);
        assert_eq!(t.segment_channel(1, 0).len(), 2000);
    }

    #[test]
    fn segment_too_short_errors() {
        let rec = record_of(vec![1.0; 10], vec![1.0; 10], 100.0);
        assert!(matches!(segment(&rec, 11), Err(Error::RecordTooShort { n: 10, l: 11 })));
    }

    #[test]
    fn standardize_hand_example() {
        // Flattened segment [1,2,3,4]: mean 2.5, population std sqrt(1.25).
        let rec = record_of(vec![1.0, 2.0], vec![3.0, 4.0], 100.0);
        let t = standardize(segment(&rec, 2).unwrap()).unwrap();
        let expected = [-1.341641, -0.447214, 0.447214, 1.341641];
        for (got, want) in t.segment(0).iter().zip(expected) {
            assert!((got - want).abs() < 1e-6, "got {got}, want {want}");
        }
    }

    #[test]
    fn standardize_fixed_point() {
        // Already zero-mean unit-std data stays put.
        let vals = [-1.341640786499874, -0.4472135954999579, 0.4472135954999579, 1.341640786499874];
        let rec = record_of(vec![vals[0], vals[1]], vec![vals[2], vals[3]], 100.0);
        let t = standardize(segment(&rec, 2).unwrap()).unwrap();
        for (got, want) in t.segment(0).iter().zip(vals) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn standardize_constant_segment_errors() {
        let rec = record_of(vec![2.0, 2.0], vec![2.0, 2.0], 100.0);
        let err = standardize(segment(&rec, 2).unwrap());
        assert!(matches!(err, Err(Error::ZeroVariance { segment: 0 })));
    }

    #[test]
    fn standardize_twice_is_rejected() {
        let rec = record_of(vec![1.0, 2.0], vec![3.0, 4.0], 100.0);
        let t = standardize(segment(&rec, 2).unwrap()).unwrap();
        assert!(standardize(t).is_err());
    }

    #[test]
    fn segment_length_examples() {
        assert_eq!(segment_length_for_rate(10.0, 20_000.0), 2000);
        assert_eq!(segment_length_for_rate(10.0, 25_600.0), 2560);
        assert_eq!(segment_length_for_rate(100.0, 20_000.0), 200);
    }

    #[test]
    fn snr_parses_from_str() {
        assert_eq!("clean".parse::<Snr>().unwrap(), Snr::Clean);
        assert_eq!("-5".parse::<Snr>().unwrap(), Snr::Db(-5.0));
        assert_eq!("10dB".parse::<Snr>().unwrap(), Snr::Db(10.0));
        assert!("loud".parse::<Snr>().is_err());
    }

    proptest! {
        #[test]
        fn segmentation_partitions_prefix(n in 1usize..400, l in 1usize..50) {
            prop_assume!(n >= l);
            let ch0: Vec<f64> = (0..n).map(|i| i as f64).collect();
            let ch1: Vec<f64> = (0..n).map(|i| (i as f64) * 0.5 - 3.0).collect();
            let rec = record_of(ch0.clone(), ch1.clone(), 100.0);
            let t = segment(&rec, l).unwrap();
            let p = t.num_segments();
            prop_assert_eq!(p, n / l);
            // Concatenating all segments reproduces the first P*L samples exactly.
            for q in 0..2 {
                let mut rebuilt = Vec::new();
                for seg in 0..p {
                    rebuilt.extend_from_slice(t.segment_channel(seg, q));
                }
                let src = if q == 0 { &ch0 } else { &ch1 };
                prop_assert_eq!(rebuilt.as_slice(), &src[..p * l]);
            }
        }

        #[test]
        fn standardization_makes_zero_mean_unit_std(seed in 0u64..1000) {
            use rand::Rng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 64;
            let ch0: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 10.0 - 5.0).collect();
            let ch1: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 + 1.0).collect();
            let rec = record_of(ch0, ch1, 100.0);
            let t = standardize(segment(&rec, 16).unwrap()).unwrap();
            for p in 0..t.num_segments() {
                let seg = t.segment(p);
                let mean = seg.iter().sum::<f64>() / seg.len() as f64;
                let var = seg.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / seg.len() as f64;
                prop_assert!(mean.abs() < 1e-6);
                prop_assert!((var.sqrt() - 1.0).abs() < 1e-6);
            }
        }
    }
}
