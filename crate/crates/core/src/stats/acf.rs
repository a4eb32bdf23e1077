//! Autocovariance / autocorrelation and a correlation-time estimate that is
//! robust for oscillatory signals.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Above this work estimate the O(n log n) FFT path replaces the direct sum.
const DIRECT_WORK_LIMIT: usize = 1 << 20;

/// Biased (1/n) autocovariance at lags `0..=max_lag`:
/// `r[k] = (1/n)·Σᵢ (xᵢ − x̄)(xᵢ₊ₖ − x̄)`, so `r[0]` is the sample variance.
///
/// The 1/n normalization keeps the sequence positive semi-definite, which
/// downstream consumers (correlation-time, block-length rules) rely on.
pub fn autocovariance(samples: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "autocovariance needs >= 2 samples, got {n}"
        )));
    }
    if max_lag >= n {
        return Err(Error::InvalidParameter(format!(
            "max_lag {max_lag} must be below the sample count {n}"
        )));
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("sample {i} is {}", samples[i])));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = samples.iter().map(|v| v - mean).collect();
    if n * (max_lag + 1) <= DIRECT_WORK_LIMIT {
        Ok(acv_direct(&d, max_lag))
    } else {
        Ok(acv_fft(&d, max_lag))
    }
}

fn acv_direct(d: &[f64], max_lag: usize) -> Vec<f64> {
    let n = d.len();
    (0..=max_lag)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..n - k {
                s += d[i] * d[i + k];
            }
            s / n as f64
        })
        .collect()
}

fn acv_fft(d: &[f64], max_lag: usize) -> Vec<f64> {
    let n = d.len();
    let m = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = d
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(m)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for v in buf.iter_mut() {
        *v = Complex::new(v.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    // Inverse pass is unnormalized (×m); fold that in with the biased 1/n.
    let scale = 1.0 / (m as f64 * n as f64);
    buf[..=max_lag].iter().map(|v| v.re * scale).collect()
}

/// Autocorrelation `ρ[k] = r[k]/r[0]` at lags `0..=max_lag`.
pub fn autocorrelation(samples: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let r = autocovariance(samples, max_lag)?;
    let r0 = r[0];
    if r0 <= 0.0 {
        return Err(Error::DegenerateVariance(
            "autocorrelation of a constant signal".into(),
        ));
    }
    Ok(r.iter().map(|v| v / r0).collect())
}

/// Correlation time in samples, via the decay of the autocorrelation
/// *envelope*: the first lag at which `max_{j ≥ k} |ρ[j]|` drops below 1/e.
///
/// For oscillatory signals `ρ` itself crosses zero every quarter period, so
/// the plain first-crossing rule wildly underestimates the correlation time;
/// the running-maximum envelope does not. Returns `n/2` (the largest lag
/// examined) when the envelope never decays that far.
pub fn envelope_correlation_time(samples: &[f64]) -> Result<usize> {
    let n = samples.len();
    if n < 20 {
        return Err(Error::InsufficientData(format!(
            "correlation time needs >= 20 samples, got {n}"
        )));
    }
    let max_lag = n / 2;
    let rho = autocorrelation(samples, max_lag)?;
    // Envelope from the right: env[k] = max(|rho[k]|, env[k+1]).
    let mut env = vec![0.0; rho.len()];
    let mut running = 0.0_f64;
    for k in (0..rho.len()).rev() {
        running = running.max(rho[k].abs());
        env[k] = running;
    }
    let threshold = (-1.0_f64).exp();
    Ok(env
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &e)| e < threshold)
        .map(|(k, _)| k)
        .unwrap_or(max_lag))
}
