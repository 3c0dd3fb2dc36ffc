//! Smoothed periodogram estimation and the nonuniform Fourier transform.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::PsdCurve;
use crate::signals::SpeedTrace;
use crate::{Error, Result};

/// Truncated Gaussian smoothing window: length `len`, sigma = len/6,
/// symmetric, peaked at the center, normalized to unit sum.
pub fn gaussian_window(len: usize) -> Vec<f64> {
    assert!(len >= 1, "window length must be at least 1");
    if len == 1 {
        return vec![1.0];
    }
    let center = (len - 1) as f64 / 2.0;
    let sigma = len as f64 / 6.0;
    let mut w: Vec<f64> = (0..len)
        .map(|i| {
            let d = (i as f64 - center) / sigma;
            (-0.5 * d * d).exp()
        })
        .collect();
    let sum: f64 = w.iter().sum();
    for v in &mut w {
        *v /= sum;
    }
    w
}

/// Same-length smoothing by linear convolution with a unit-sum Gaussian.
///
/// At the edges the window is renormalized over the samples it actually
/// covers, so constant inputs stay constant all the way to the boundary.
pub fn gaussian_smooth(values: &[f64], len: usize) -> Vec<f64> {
    if len <= 1 || values.len() <= 1 {
        return values.to_vec();
    }
    let w = gaussian_window(len);
    let center = (len - 1) / 2;
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = 0.0;
        let mut weight = 0.0;
        for (i, &wi) in w.iter().enumerate() {
            let idx = j as isize + i as isize - center as isize;
            if idx >= 0 && (idx as usize) < n {
                acc += wi * values[idx as usize];
                weight += wi;
            }
        }
        out.push(acc / weight);
    }
    out
}

/// One-sided smoothed power spectral density of a single-channel segment,
/// in dB.
///
/// The periodogram is scaled by `1/(m-1)` where `m` is the number of input
/// samples actually transformed (`min(samples.len(), nfft)`; shorter inputs
/// are zero-padded, longer ones truncated to `nfft`), then convolved with a
/// unit-sum Gaussian window of length `smooth_len` and converted to dB.
/// Returns `nfft/2 + 1` bins.
pub fn smoothed_psd(samples: &[f64], sample_rate_hz: f64, nfft: usize, smooth_len: usize) -> Result<PsdCurve> {
    if samples.len() < 2 {
        return Err(Error::Config("psd input needs at least 2 samples".into()));
    }
    if nfft < 2 {
        return Err(Error::Config(format!("nfft must be >= 2, got {nfft}")));
    }
    if smooth_len < 1 {
        return Err(Error::Config("smooth_len must be >= 1".into()));
    }
    if smooth_len > nfft {
        return Err(Error::Config(format!("smooth_len {smooth_len} exceeds nfft {nfft}")));
    }
    if !(sample_rate_hz > 0.0) {
        return Err(Error::Config("sample_rate_hz must be positive".into()));
    }

    let used = samples.len().min(nfft);
    let mut buf: Vec<Complex<f64>> = samples[..used].iter().map(|&x| Complex::new(x, 0.0)).collect();
    buf.resize(nfft, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);

    let scale = 1.0 / (used as f64 - 1.0);
    let bins = nfft / 2 + 1;
    let power: Vec<f64> = buf[..bins].iter().map(|c| c.norm_sqr() * scale).collect();
    let smoothed = gaussian_smooth(&power, smooth_len);

    let freqs: Vec<f64> = (0..bins).map(|k| k as f64 * sample_rate_hz / nfft as f64).collect();
    let db: Vec<f64> = smoothed.iter().map(|&p| 10.0 * p.log10()).collect();
    PsdCurve::new(freqs, db)
}

/// Power spectrum of a nonuniformly sampled speed trace by direct
/// evaluation of the nonuniform DFT on the mean-removed rpm series.
///
/// Frequencies run from 0 to `f_scale_hz / 2` with spacing
/// `f_scale_hz / N`; magnitude squared is normalized by the sample count.
/// For uniformly spaced timestamps with `f_scale_hz = 1/dt` this reduces to
/// the ordinary DFT periodogram.
pub fn nuft_psd(trace: &SpeedTrace, f_scale_hz: f64) -> Result<PsdCurve> {
    let n = trace.len();
    if n < 8 {
        return Err(Error::Invalid(format!("speed trace too short for spectral analysis: {n} < 8 samples")));
    }
    if !(f_scale_hz > 0.0) {
        return Err(Error::Config("f_scale_hz must be positive".into()));
    }

    let mean = crate::util::mean(trace.rpm());
    let x: Vec<f64> = trace.rpm().iter().map(|r| r - mean).collect();
    let t = trace.timestamps_s();

    let bins = n / 2 + 1;
    let mut freqs = Vec::with_capacity(bins);
    let mut power_db = Vec::with_capacity(bins);
    for k in 0..bins {
        let f = k as f64 * f_scale_hz / n as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (xi, ti) in x.iter().zip(t) {
            let ang = -2.0 * PI * f * ti;
            re += xi * ang.cos();
            im += xi * ang.sin();
        }
        freqs.push(f);
        power_db.push(10.0 * ((re * re + im * im) / n as f64).log10());
    }
    PsdCurve::new(freqs, power_db)
}

/// Fraction of the curve's total linear power at frequencies `<= f_cut_hz`.
///
/// A curve with zero total power reports 1.0 when the cut covers the whole
/// axis and 0.0 otherwise.
pub fn power_fraction_below(psd: &PsdCurve, f_cut_hz: f64) -> f64 {
    assert!(!psd.is_empty(), "power_fraction_below requires a nonempty curve");
    let linear = psd.power_linear();
    let total: f64 = linear.iter().sum();
    if total == 0.0 {
        let max_f = *psd.frequencies_hz().last().unwrap();
        return if f_cut_hz >= max_f { 1.0 } else { 0.0 };
    }
    let below: f64 = psd
        .frequencies_hz()
        .iter()
        .zip(&linear)
        .filter(|(f, _)| **f <= f_cut_hz)
        .map(|(_, p)| p)
        .sum();
    below / total
}
