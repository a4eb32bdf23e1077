//! Excess kurtosis, the moment ratio separating oscillation mechanisms:
//! near 0 for noise-sustained (Gaussian) ringing, pinned at −1.5 for a pure
//! sinusoid, and in between (or above, under strong amplitude noise) for a
//! stochastic limit cycle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Minimum sample count for a meaningful fourth-moment ratio.
pub const MIN_KURTOSIS_SAMPLES: usize = 100;

/// Population excess kurtosis `m₄/m₂² − 3` (biased moment estimators, no
/// small-sample correction).
///
/// Errors with [`Error::InsufficientData`] below [`MIN_KURTOSIS_SAMPLES`]
/// samples, [`Error::NonFinite`] on NaN/∞ input, and
/// [`Error::DegenerateVariance`] when the sample variance is zero to within
/// floating-point resolution (moment ratios are undefined there).
pub fn excess_kurtosis(samples: &[f64]) -> Result<f64> {
    if samples.len() < MIN_KURTOSIS_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "excess kurtosis needs >= {MIN_KURTOSIS_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "sample {i} is {}",
            samples[i]
        )));
    }
    excess_kurtosis_unchecked(samples)
}

/// Core computation without the length/finiteness gate, for callers that
/// already validated (bootstrap replicates, moving windows).
pub(crate) fn excess_kurtosis_unchecked(samples: &[f64]) -> Result<f64> {
    let n = samples.len() as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mean = samples
        .iter()
        .inspect(|&&v| {
            lo = lo.min(v);
            hi = hi.max(v);
        })
        .sum::<f64>()
        / n;
    if lo == hi {
        return Err(Error::DegenerateVariance(format!(
            "all {} samples equal {lo}; kurtosis is undefined for a constant signal",
            samples.len()
        )));
    }
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for &v in samples {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    // A spread within summation roundoff of the mean level is numerically
    // indistinguishable from a constant signal; scale the floor with n because
    // naive summation error grows with the number of terms.
    let floor = n * f64::EPSILON * mean.abs();
    if m2 <= floor * floor {
        return Err(Error::DegenerateVariance(format!(
            "sample variance {m2:.3e} is zero within floating-point resolution"
        )));
    }
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Excess kurtosis over sliding windows; `times` holds each window's center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KurtosisTrace {
    /// Window length actually used, seconds.
    pub window_duration: f64,
    /// Hop between window starts, seconds.
    pub hop: f64,
    /// Center time of each retained window.
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Sliding-window excess kurtosis.
///
/// Windows whose variance is degenerate (e.g. a flat-lined stretch) are
/// skipped; if every window is degenerate the error is reported. Each window
/// must contain at least [`MIN_KURTOSIS_SAMPLES`] samples.
pub fn moving_kurtosis(series: &TimeSeries, window_duration: f64, hop: f64) -> Result<KurtosisTrace> {
    if !(window_duration.is_finite() && window_duration > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window_duration must be > 0, got {window_duration}"
        )));
    }
    if !(hop.is_finite() && hop > 0.0) {
        return Err(Error::InvalidParameter(format!("hop must be > 0, got {hop}")));
    }
    let win = (window_duration / series.dt).round() as usize;
    let hop_n = ((hop / series.dt).round() as usize).max(1);
    if win < MIN_KURTOSIS_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "window of {win} samples is below the minimum {MIN_KURTOSIS_SAMPLES}"
        )));
    }
    if win > series.len() {
        return Err(Error::InsufficientData(format!(
            "window of {win} samples exceeds record length {}",
            series.len()
        )));
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut degenerate = 0usize;
    let mut start = 0usize;
    while start + win <= series.len() {
        match excess_kurtosis_unchecked(&series.samples[start..start + win]) {
            Ok(k) => {
                times.push(series.time_at(start) + 0.5 * (win - 1) as f64 * series.dt);
                values.push(k);
            }
            Err(Error::DegenerateVariance(_)) => degenerate += 1,
            Err(e) => return Err(e),
        }
        start += hop_n;
    }
    if values.is_empty() {
        return Err(Error::DegenerateVariance(format!(
            "all {degenerate} windows have zero variance"
        )));
    }
    Ok(KurtosisTrace {
        window_duration: win as f64 * series.dt,
        hop: hop_n as f64 * series.dt,
        times,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Deterministic two-tone used across the stats golden tests.
    fn two_tone(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = i as f64;
                (0.7 * t).sin() + 0.3 * (2.1 * t + 1.0).cos()
            })
            .collect()
    }

    #[test]
    fn matches_independent_reference_value() {
        // Frozen from an independent implementation of the same estimator.
        let k = excess_kurtosis(&two_tone(256)).unwrap();
        assert!(
            (k - (-0.8464228394921673)).abs() < 1e-12,
            "kurtosis {k}"
        );
    }

    #[test]
    fn pure_sinusoid_gives_minus_three_halves() {
        // A whole number of cycles samples the phase uniformly, so the moment
        // sums are exact (Σ sin² = n/2, Σ sin⁴ = 3n/8) and the excess kurtosis
        // is −1.5 up to floating-point roundoff.
        let n = 100_000;
        let x: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 733.0 * i as f64 / n as f64).sin())
            .collect();
        let k = excess_kurtosis(&x).unwrap();
        assert!((k + 1.5).abs() < 1e-9, "kurtosis {k}");
    }

    #[test]
    fn affine_invariance() {
        let x = two_tone(500);
        let y: Vec<f64> = x.iter().map(|v| -3.5 * v + 11.0).collect();
        let kx = excess_kurtosis(&x).unwrap();
        let ky = excess_kurtosis(&y).unwrap();
        assert!((kx - ky).abs() < 1e-9, "{kx} vs {ky}");
    }

    #[test]
    fn rejects_short_constant_and_non_finite_input() {
        assert!(matches!(
            excess_kurtosis(&[1.0; 99]),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            excess_kurtosis(&[4.2; 200]),
            Err(Error::DegenerateVariance(_))
        ));
        let mut x = two_tone(200);
        x[17] = f64::NAN;
        assert!(matches!(excess_kurtosis(&x), Err(Error::NonFinite(_))));
    }

    #[test]
    fn moving_windows_cover_record_and_skip_flat_stretches() {
        let dt = 0.1;
        let mut samples = two_tone(1000);
        // Flat-line the second quarter; those windows must be skipped.
        for v in &mut samples[250..500] {
            *v = 2.0;
        }
        let series = TimeSeries::new("x", 0.0, dt, samples).unwrap();
        let trace = moving_kurtosis(&series, 25.0, 12.5).unwrap();
        assert_eq!(trace.window_duration, 25.0);
        // Window starts: 0, 125, 250, ..., 750 → 7 windows; the two fully
        // inside the flat stretch (starts 250, 375... within 250..500-250)
        // are degenerate and dropped.
        assert!(trace.values.len() < 7);
        assert!(!trace.values.is_empty());
        for t in &trace.times {
            assert!(*t >= 12.0 && *t <= 88.0);
        }
    }

    #[test]
    fn moving_kurtosis_rejects_undersized_windows() {
        let series = TimeSeries::new("x", 0.0, 0.1, two_tone(1000)).unwrap();
        assert!(matches!(
            moving_kurtosis(&series, 5.0, 2.0),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            moving_kurtosis(&series, 500.0, 10.0),
            Err(Error::InsufficientData(_))
        ));
        assert!(moving_kurtosis(&series, 25.0, 0.0).is_err());
    }

    #[test]
    fn fully_constant_record_reports_degenerate_variance() {
        let series = TimeSeries::new("x", 0.0, 0.1, vec![1.0; 1000]).unwrap();
        assert!(matches!(
            moving_kurtosis(&series, 25.0, 12.5),
            Err(Error::DegenerateVariance(_))
        ));
    }
}
