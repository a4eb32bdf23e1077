//! Welch averaged-periodogram spectral estimation.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Fewer bins than this cannot resolve a floor and a peak meaningfully.
pub const MIN_SEGMENT_LEN: usize = 32;

/// Segment taper applied before each periodogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    /// Periodic Hann window `0.5 − 0.5·cos(2πi/N)`; the default. Its
    /// spectral leakage is confined to ±1 bin for on-grid tones.
    Hann,
    /// No taper; exact Parseval behaviour, heavy leakage.
    Rectangular,
}

impl Taper {
    fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Taper::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
                .collect(),
            Taper::Rectangular => vec![1.0; n],
        }
    }
}

/// One-sided power spectral density estimate on the grid `k·fs/segment_len`.
///
/// `∫ psd df` recovers the signal variance (up to estimator bias), with the
/// DC and Nyquist bins carrying half weight. `resolution_bw` is the
/// equivalent noise bandwidth of the taper — the width a pure tone smears to —
/// in Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    pub freqs: Vec<f64>,
    pub psd: Vec<f64>,
    /// Equivalent noise bandwidth `fs·Σw² / (Σw)²`, Hz.
    pub resolution_bw: f64,
    /// Number of averaged segments.
    pub segments: usize,
    pub sample_rate: f64,
}

impl SpectrumEstimate {
    /// Frequency-bin spacing, Hz.
    pub fn bin_width(&self) -> f64 {
        if self.freqs.len() > 1 {
            self.freqs[1] - self.freqs[0]
        } else {
            0.0
        }
    }

    /// Trapezoid-free total power `Σ psd·Δf` (the natural inverse of the
    /// one-sided normalization with half-weight edge bins).
    pub fn total_power(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.bin_width()
    }
}

/// Welch PSD: the record mean is removed once, segments of `segment_len`
/// samples advance by `segment_len·(1 − overlap)` (rounded), each is tapered
/// and periodogrammed, and the periodograms are averaged.
pub fn welch_psd(
    series: &TimeSeries,
    segment_len: usize,
    overlap: f64,
    taper: Taper,
) -> Result<SpectrumEstimate> {
    let n = series.len();
    if segment_len < MIN_SEGMENT_LEN {
        return Err(Error::InvalidParameter(format!(
            "segment_len must be >= {MIN_SEGMENT_LEN}, got {segment_len}"
        )));
    }
    if segment_len > n {
        return Err(Error::InsufficientData(format!(
            "record of {n} samples is shorter than one segment of {segment_len}"
        )));
    }
    if !(overlap.is_finite() && (0.0..1.0).contains(&overlap)) {
        return Err(Error::InvalidParameter(format!(
            "overlap must lie in [0, 1), got {overlap}"
        )));
    }

    let fs = series.sample_rate();
    let hop = ((segment_len as f64 * (1.0 - overlap)).round() as usize).max(1);
    let segments = 1 + (n - segment_len) / hop;

    let mean = series.samples.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.samples.iter().map(|v| v - mean).collect();

    let w = taper.weights(segment_len);
    let s2: f64 = w.iter().map(|v| v * v).sum();
    let sw: f64 = w.iter().sum();

    let n_bins = segment_len / 2 + 1;
    let mut acc = vec![0.0_f64; n_bins];
    let fft = FftPlanner::new().plan_fft_forward(segment_len);
    let mut buf = vec![Complex::new(0.0, 0.0); segment_len];
    for s in 0..segments {
        let seg = &centered[s * hop..s * hop + segment_len];
        for (b, (&v, &wi)) in buf.iter_mut().zip(seg.iter().zip(&w)) {
            *b = Complex::new(v * wi, 0.0);
        }
        fft.process(&mut buf);
        for (a, v) in acc.iter_mut().zip(&buf[..n_bins]) {
            *a += v.norm_sqr();
        }
    }

    let norm = 2.0 / (fs * s2 * segments as f64);
    let mut psd: Vec<f64> = acc.iter().map(|a| a * norm).collect();
    psd[0] *= 0.5;
    if segment_len % 2 == 0 {
        *psd.last_mut().expect("n_bins >= 1") *= 0.5;
    }
    let freqs = (0..n_bins).map(|k| k as f64 * fs / segment_len as f64).collect();

    Ok(SpectrumEstimate {
        freqs,
        psd,
        resolution_bw: fs * s2 / (sw * sw),
        segments,
        sample_rate: fs,
    })
}
