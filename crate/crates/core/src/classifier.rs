//! Mechanism classification: spectral gate → kurtosis gate → line-width
//! discrimination, with a moving-block bootstrap interval on the kurtosis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{simulate, Model, SimConfig};
use crate::series::TimeSeries;
use crate::stats::{
    envelope_correlation_time, excess_kurtosis, excess_kurtosis_unchecked, quantile, welch_psd,
    SpectrumEstimate, Taper,
};

/// Records shorter than this cannot support the spectral + moment pipeline.
pub const MIN_CLASSIFY_SAMPLES: usize = 1000;

/// Thresholds and estimator settings for [`classify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisConfig {
    /// Half-width ε of the "Gaussian" kurtosis band: |k| < ε reads as
    /// noise-sustained ringing.
    pub kurtosis_epsilon: f64,
    /// Peaks wider than this many resolution bandwidths at half power read
    /// as intrinsic broadening (limit cycle); at or below, as a drive line.
    pub spike_bw_ratio_max: f64,
    /// Peak-to-floor ratio (dB) below which the record counts as having no
    /// oscillation at all.
    pub peak_snr_min_db: f64,
    /// Minimum ratio of peak frequency to half-power width for the maximum
    /// to count as an oscillatory line. Monotone low-pass spectra (drift,
    /// relaxation noise) put their largest bin at the bottom of the axis
    /// with a width spanning the whole roll-off; the default 1.0 demands a
    /// line narrower than its own center frequency.
    pub peak_quality_min: f64,
    /// Bootstrap replicates for the kurtosis interval.
    pub bootstrap_reps: usize,
    /// Two-sided confidence level of that interval.
    pub ci_level: f64,
    /// Seed for the bootstrap resampler.
    pub bootstrap_seed: u64,
    /// Welch segment length as a fraction of the record.
    pub segment_fraction: f64,
    /// Welch segment overlap.
    pub overlap: f64,
    pub taper: Taper,
}

impl Default for DiagnosisConfig {
    fn default() -> Self {
        Self {
            kurtosis_epsilon: 0.45,
            spike_bw_ratio_max: 3.0,
            peak_snr_min_db: 10.0,
            peak_quality_min: 1.0,
            bootstrap_reps: 200,
            ci_level: 0.90,
            bootstrap_seed: 0,
            segment_fraction: 0.125,
            overlap: 0.5,
            taper: Taper::Hann,
        }
    }
}

impl DiagnosisConfig {
    fn validate(&self) -> Result<()> {
        let checks = [
            ("kurtosis_epsilon", self.kurtosis_epsilon, self.kurtosis_epsilon > 0.0),
            (
                "spike_bw_ratio_max",
                self.spike_bw_ratio_max,
                self.spike_bw_ratio_max >= 1.0,
            ),
            ("peak_snr_min_db", self.peak_snr_min_db, self.peak_snr_min_db >= 0.0),
            ("peak_quality_min", self.peak_quality_min, self.peak_quality_min >= 0.0),
            ("ci_level", self.ci_level, self.ci_level > 0.0 && self.ci_level < 1.0),
            (
                "segment_fraction",
                self.segment_fraction,
                self.segment_fraction > 0.0 && self.segment_fraction <= 1.0,
            ),
            ("overlap", self.overlap, (0.0..1.0).contains(&self.overlap)),
        ];
        for (name, v, ok) in checks {
            if !ok || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} out of range: {v}")));
            }
        }
        if self.bootstrap_reps < 50 {
            return Err(Error::InvalidParameter(format!(
                "bootstrap_reps must be >= 50, got {}",
                self.bootstrap_reps
            )));
        }
        Ok(())
    }
}

/// Outcome of the mechanism flowchart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// No spectral peak clears the detection threshold.
    NoOscillation,
    /// Peak present, kurtosis Gaussian: noise-sustained ringing.
    WeaklyDamped,
    /// Peak present, non-Gaussian, intrinsically broadened line.
    LimitCycle,
    /// Peak present, non-Gaussian, resolution-limited line.
    Forced,
    /// The kurtosis interval straddles the decision boundary.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::NoOscillation => "no_oscillation",
            Verdict::WeaklyDamped => "weakly_damped",
            Verdict::LimitCycle => "limit_cycle",
            Verdict::Forced => "forced",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Shape of the dominant spectral peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikeMetrics {
    /// Location of the largest non-DC bin, Hz.
    pub peak_freq_hz: f64,
    /// Peak density over the median density (robust floor), dB.
    pub peak_snr_db: f64,
    /// Width between the outermost half-power crossings, Hz.
    pub half_power_bw_hz: f64,
    /// `half_power_bw_hz / resolution_bw`, clamped to ≥ 1 (a line cannot
    /// measure narrower than the window).
    pub bw_ratio: f64,
}

/// Measures the dominant peak of a Welch estimate: location, SNR over the
/// median floor, and half-power width between the *outermost* crossings of
/// half maximum (linear interpolation on the edge bins). The outermost rule
/// is identical to the nearest-crossing rule for clean unimodal peaks but
/// does not collapse on interior speckle dips of broad noisy lines. The DC
/// bin never participates.
pub fn spike_metrics(spectrum: &SpectrumEstimate) -> Result<SpikeMetrics> {
    let psd = &spectrum.psd;
    let freqs = &spectrum.freqs;
    if psd.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "spike metrics need >= 8 spectral bins, got {}",
            psd.len()
        )));
    }
    if !(spectrum.resolution_bw.is_finite() && spectrum.resolution_bw > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution_bw must be > 0, got {}",
            spectrum.resolution_bw
        )));
    }

    let (peak_idx, &peak) = psd[1..]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i + 1, v))
        .expect("len checked above");
    let floor = quantile(&psd[1..], 0.5)?;
    if floor <= 0.0 {
        return Err(Error::DegenerateVariance(
            "median spectral density is zero".into(),
        ));
    }
    let peak_snr_db = 10.0 * (peak / floor).log10();

    let half = 0.5 * peak;
    let lo_i = (1..psd.len()).find(|&i| psd[i] >= half).expect("peak >= half");
    let hi_i = (1..psd.len()).rev().find(|&i| psd[i] >= half).expect("peak >= half");
    let f_lo = if psd[lo_i - 1] >= half {
        freqs[lo_i - 1]
    } else {
        let span = freqs[lo_i] - freqs[lo_i - 1];
        freqs[lo_i - 1] + span * (half - psd[lo_i - 1]) / (psd[lo_i] - psd[lo_i - 1])
    };
    let f_hi = if hi_i + 1 >= psd.len() {
        freqs[hi_i]
    } else {
        let span = freqs[hi_i + 1] - freqs[hi_i];
        freqs[hi_i] + span * (psd[hi_i] - half) / (psd[hi_i] - psd[hi_i + 1])
    };
    let half_power_bw_hz = f_hi - f_lo;

    Ok(SpikeMetrics {
        peak_freq_hz: freqs[peak_idx],
        peak_snr_db,
        half_power_bw_hz,
        bw_ratio: (half_power_bw_hz / spectrum.resolution_bw).max(1.0),
    })
}

/// Moving-block bootstrap confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCi {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub replicates: usize,
    /// Resampling block length, samples.
    pub block_len: usize,
}

/// Percentile interval for the excess kurtosis under a moving-block
/// bootstrap. The block length is 10× the autocorrelation-envelope decay
/// time, clamped to `[10, n/4]`, so dependent samples stay together.
pub fn bootstrap_kurtosis_ci(
    samples: &[f64],
    replicates: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapCi> {
    let n = samples.len();
    if n < 200 {
        return Err(Error::InsufficientData(format!(
            "bootstrap needs >= 200 samples, got {n}"
        )));
    }
    if replicates < 50 {
        return Err(Error::InvalidParameter(format!(
            "replicates must be >= 50, got {replicates}"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "level must lie in (0, 1), got {level}"
        )));
    }

    let tau = envelope_correlation_time(samples)?;
    let block_len = (10 * tau).clamp(10, n / 4);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Keep the bootstrap stream disjoint from simulation/noise streams that
    // may share the same seed.
    rng.set_stream(u64::MAX);

    let mut resample = vec![0.0_f64; n];
    let mut kvals = Vec::with_capacity(replicates);
    for _ in 0..replicates {
        let mut pos = 0;
        while pos < n {
            let start = rng.gen_range(0..=n - block_len);
            let take = block_len.min(n - pos);
            resample[pos..pos + take].copy_from_slice(&samples[start..start + take]);
            pos += take;
        }
        kvals.push(excess_kurtosis_unchecked(&resample)?);
    }

    let alpha = 0.5 * (1.0 - level);
    Ok(BootstrapCi {
        lower: quantile(&kvals, alpha)?,
        upper: quantile(&kvals, 1.0 - alpha)?,
        level,
        replicates,
        block_len,
    })
}

/// Structured outcome of [`classify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisReport {
    /// Report format identifier.
    pub schema: String,
    pub channel: String,
    /// Time span analyzed, seconds.
    pub window: [f64; 2],
    pub samples: usize,
    pub verdict: Verdict,
    pub excess_kurtosis: f64,
    pub kurtosis_ci: [f64; 2],
    pub ci_level: f64,
    /// Bootstrap resampling block, samples.
    pub block_len: usize,
    pub spike: SpikeMetrics,
    pub config: DiagnosisConfig,
    pub notes: Vec<String>,
}

pub const DIAGNOSIS_SCHEMA: &str = "diagnosis-report/v1";

/// Runs the mechanism flowchart on one channel:
///
/// 1. Welch PSD (segments of `segment_fraction`·n samples) → spike metrics.
/// 2. Peak SNR below `peak_snr_min_db`, or a peak wider than its own center
///    frequency allows (`peak_quality_min`) → [`Verdict::NoOscillation`].
/// 3. Excess kurtosis + bootstrap interval. An interval straddling the
///    ±`kurtosis_epsilon` gate → [`Verdict::Inconclusive`].
/// 4. |k| < ε → [`Verdict::WeaklyDamped`]; otherwise a resolution-limited
///    peak reads as [`Verdict::Forced`], a broadened one as
///    [`Verdict::LimitCycle`].
pub fn classify(series: &TimeSeries, cfg: &DiagnosisConfig) -> Result<DiagnosisReport> {
    cfg.validate()?;
    let n = series.len();
    if n < MIN_CLASSIFY_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "classification needs >= {MIN_CLASSIFY_SAMPLES} samples, got {n}"
        )));
    }

    let segment_len =
        ((n as f64 * cfg.segment_fraction).round() as usize).clamp(crate::stats::MIN_SEGMENT_LEN, n);
    let spectrum = welch_psd(series, segment_len, cfg.overlap, cfg.taper)?;
    let spike = spike_metrics(&spectrum)?;

    let k = excess_kurtosis(&series.samples)?;
    let ci = bootstrap_kurtosis_ci(
        &series.samples,
        cfg.bootstrap_reps,
        cfg.ci_level,
        cfg.bootstrap_seed,
    )?;

    let mut notes = vec![format!(
        "peak {:.6} Hz, snr {:.1} dB, half-power width {:.6} Hz ({:.2} resolution bandwidths)",
        spike.peak_freq_hz, spike.peak_snr_db, spike.half_power_bw_hz, spike.bw_ratio
    )];

    let eps = cfg.kurtosis_epsilon;
    // Width resolved no finer than one resolution bandwidth (same clamp as
    // bw_ratio); the quality factor separates an isolated line from the
    // edge bin of a monotone roll-off.
    let quality =
        spike.peak_freq_hz / spike.half_power_bw_hz.max(spectrum.resolution_bw);
    let verdict = if spike.peak_snr_db < cfg.peak_snr_min_db {
        notes.push(format!(
            "peak snr {:.1} dB is below the {:.1} dB detection threshold",
            spike.peak_snr_db, cfg.peak_snr_min_db
        ));
        Verdict::NoOscillation
    } else if quality < cfg.peak_quality_min {
        notes.push(format!(
            "spectral maximum at {:.6} Hz is not an isolated line: half-power \
             width covers {:.2}× the peak frequency (low-pass roll-off)",
            spike.peak_freq_hz,
            1.0 / quality
        ));
        Verdict::NoOscillation
    } else {
        let min_abs = if ci.lower <= 0.0 && 0.0 <= ci.upper {
            0.0
        } else {
            ci.lower.abs().min(ci.upper.abs())
        };
        let max_abs = ci.lower.abs().max(ci.upper.abs());
        if (min_abs < eps) != (max_abs < eps) {
            notes.push(format!(
                "kurtosis interval [{:.3}, {:.3}] straddles the gaussian gate |k| = {eps}",
                ci.lower, ci.upper
            ));
            let alternative = if spike.bw_ratio > cfg.spike_bw_ratio_max {
                Verdict::LimitCycle
            } else {
                Verdict::Forced
            };
            notes.push(format!(
                "candidates: {} (if |k| < {eps}) or {alternative} (if not)",
                Verdict::WeaklyDamped
            ));
            Verdict::Inconclusive
        } else if k.abs() < eps {
            Verdict::WeaklyDamped
        } else if spike.bw_ratio > cfg.spike_bw_ratio_max {
            notes.push(format!(
                "line broadened {:.2}× the resolution bandwidth (threshold {})",
                spike.bw_ratio, cfg.spike_bw_ratio_max
            ));
            Verdict::LimitCycle
        } else {
            notes.push(format!(
                "line is resolution-limited ({:.2}× <= {})",
                spike.bw_ratio, cfg.spike_bw_ratio_max
            ));
            Verdict::Forced
        }
    };

    Ok(DiagnosisReport {
        schema: DIAGNOSIS_SCHEMA.to_string(),
        channel: series.label.clone(),
        window: [series.t0, series.time_at(n - 1)],
        samples: n,
        verdict,
        excess_kurtosis: k,
        kurtosis_ci: [ci.lower, ci.upper],
        ci_level: ci.level,
        block_len: ci.block_len,
        spike,
        config: cfg.clone(),
        notes,
    })
}

/// Spread of the kurtosis estimator under replicated simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    /// Kurtosis of the first output channel, one value per replicate
    /// (streams `base.stream..base.stream + runs`).
    pub values: Vec<f64>,
    /// Central empirical interval endpoints at `interval_level`.
    pub lower: f64,
    pub upper: f64,
    pub interval_level: f64,
    pub runs: usize,
}

/// Simulates `runs` independent replicates of `model` (varying the RNG
/// stream), measures the excess kurtosis of the first channel of each, and
/// summarizes the spread as a central `interval_level` interval (e.g. 0.90
/// → the [5th, 95th] percentile range). Replicates run in parallel;
/// results are deterministic for a fixed `(seed, stream)` base.
pub fn monte_carlo_kurtosis(
    model: &Model,
    base: &SimConfig,
    runs: usize,
    interval_level: f64,
) -> Result<MonteCarloSummary> {
    if runs < 2 {
        return Err(Error::InvalidParameter(format!(
            "runs must be >= 2, got {runs}"
        )));
    }
    if !(interval_level > 0.0 && interval_level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "interval_level must lie in (0, 1), got {interval_level}"
        )));
    }
    let values: Vec<f64> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let cfg = SimConfig {
                stream: base.stream + i as u64,
                ..base.clone()
            };
            let record = simulate(model, &cfg)?;
            excess_kurtosis(&record.channels()[0].samples)
        })
        .collect::<Result<_>>()?;
    let alpha = 0.5 * (1.0 - interval_level);
    Ok(MonteCarloSummary {
        lower: quantile(&values, alpha)?,
        upper: quantile(&values, 1.0 - alpha)?,
        values,
        interval_level,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        simulate_forced, simulate_limit_cycle, simulate_ornstein_uhlenbeck,
        simulate_weakly_damped, ForcedParams, LimitCycleParams, OrnsteinUhlenbeckParams,
        WeaklyDampedParams,
    };
    use rand_distr::{Distribution, StandardNormal};

    fn spectrum_from(freqs: Vec<f64>, psd: Vec<f64>, rbw: f64) -> SpectrumEstimate {
        SpectrumEstimate {
            sample_rate: 2.0 * freqs.last().copied().unwrap_or(1.0),
            freqs,
            psd,
            resolution_bw: rbw,
            segments: 1,
        }
    }

    #[test]
    fn spike_metrics_triangular_peak() {
        // Floor 1.0 with a triangular peak of height 9 at bin 10; half power
        // 4.5 crosses between bins 8–9 and 11–12.
        let n = 21;
        let freqs: Vec<f64> = (0..n).map(|i| i as f64 * 0.1).collect();
        let mut psd = vec![1.0; n];
        psd[9] = 5.0;
        psd[10] = 9.0;
        psd[11] = 5.0;
        let m = spike_metrics(&spectrum_from(freqs, psd, 0.1)).unwrap();
        assert!((m.peak_freq_hz - 1.0).abs() < 1e-12);
        assert!((m.peak_snr_db - 10.0 * 9.0f64.log10()).abs() < 1e-9);
        // Left crossing: between bins 8 (1.0) and 9 (5.0) at 4.5 →
        // f = 0.8 + 0.1·(3.5/4) = 0.8875; symmetric on the right: 1.1125.
        assert!((m.half_power_bw_hz - 0.225).abs() < 1e-9, "{}", m.half_power_bw_hz);
        assert!((m.bw_ratio - 2.25).abs() < 1e-9);
    }

    #[test]
    fn spike_metrics_delta_line_clamps_to_unity() {
        let n = 64;
        let freqs: Vec<f64> = (0..n).map(|i| i as f64 * 0.05).collect();
        let mut psd = vec![1e-6; n];
        psd[20] = 1.0;
        let m = spike_metrics(&spectrum_from(freqs, psd, 0.05)).unwrap();
        // A single hot bin has no interior half-power structure: the
        // interpolated width is about one bin, so the clamped ratio sits at
        // unity up to the floor's share of the interpolation (1e-6 per edge).
        assert!((m.bw_ratio - 1.0).abs() < 1e-4, "{}", m.bw_ratio);
        assert!(m.peak_snr_db > 50.0);
    }

    #[test]
    fn spike_metrics_uses_outermost_crossings() {
        // A broad plateau with an interior dip below half power: the
        // nearest-crossing rule would stop at the dip; the outermost rule
        // must span the full plateau.
        let n = 41;
        let freqs: Vec<f64> = (0..n).map(|i| i as f64 * 0.1).collect();
        let mut psd = vec![0.01; n];
        psd[10..=30].fill(10.0);
        psd[20] = 1.0; // dip below half power (5.0)
        let m = spike_metrics(&spectrum_from(freqs, psd, 0.1)).unwrap();
        assert!(m.half_power_bw_hz > 1.9, "width {}", m.half_power_bw_hz);
    }

    #[test]
    fn spike_metrics_rejects_degenerate_input() {
        let freqs: Vec<f64> = (0..16).map(|i| i as f64).collect();
        assert!(spike_metrics(&spectrum_from(freqs.clone(), vec![0.0; 16], 1.0)).is_err());
        assert!(spike_metrics(&spectrum_from(freqs[..4].to_vec(), vec![1.0; 4], 1.0)).is_err());
    }

    fn gaussian_series(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn bootstrap_is_deterministic_and_brackets_the_point_estimate() {
        let x = gaussian_series(5000, 1);
        let a = bootstrap_kurtosis_ci(&x, 200, 0.9, 7).unwrap();
        let b = bootstrap_kurtosis_ci(&x, 200, 0.9, 7).unwrap();
        assert_eq!(a, b);
        let c = bootstrap_kurtosis_ci(&x, 200, 0.9, 8).unwrap();
        assert_ne!(a.lower, c.lower);

        let k = excess_kurtosis(&x).unwrap();
        assert!(a.lower < k && k < a.upper, "[{}, {}] vs {k}", a.lower, a.upper);
        assert!(a.lower < a.upper);
        // White noise: envelope decay is immediate, so the clamp floor rules.
        assert_eq!(a.block_len, 10);
    }

    #[test]
    fn bootstrap_coverage_on_iid_gaussian() {
        // 200 synthetic datasets; true excess kurtosis 0. Nominal coverage
        // 0.90 has binomial σ ≈ 0.021 over 200 trials, so require ≥ 0.85
        // (2.4σ below nominal) to keep the test sharp but not flaky.
        let trials = 200;
        let hits: usize = (0..trials)
            .into_par_iter()
            .map(|t| {
                let x = gaussian_series(2000, 1000 + t as u64);
                let ci = bootstrap_kurtosis_ci(&x, 200, 0.9, t as u64).unwrap();
                usize::from(ci.lower <= 0.0 && 0.0 <= ci.upper)
            })
            .sum();
        let coverage = hits as f64 / trials as f64;
        assert!(coverage >= 0.85, "coverage {coverage}");
    }

    #[test]
    fn bootstrap_sinusoid_interval_is_tight_around_minus_three_halves() {
        let n = 10_000;
        let x: Vec<f64> = (0..n).map(|i| (0.0761 * i as f64).sin()).collect();
        let k = excess_kurtosis(&x).unwrap();
        assert!((k + 1.5).abs() < 2e-3, "k = {k}");
        let ci = bootstrap_kurtosis_ci(&x, 200, 0.9, 0).unwrap();
        // Long-range dependence saturates the block clamp at n/4.
        assert_eq!(ci.block_len, n / 4);
        assert!(ci.lower >= -1.55 && ci.upper <= -1.45, "[{}, {}]", ci.lower, ci.upper);
    }

    #[test]
    fn bootstrap_rejects_bad_arguments() {
        let x = gaussian_series(300, 2);
        assert!(bootstrap_kurtosis_ci(&x[..150], 200, 0.9, 0).is_err());
        assert!(bootstrap_kurtosis_ci(&x, 10, 0.9, 0).is_err());
        assert!(bootstrap_kurtosis_ci(&x, 200, 1.0, 0).is_err());
    }

    /// 64,000 s records at 10 Hz resolve the intrinsic limit-cycle linewidth
    /// (~1.6 mHz) with a synced Welch segment of 1/8 the record; shared by
    /// the classification tests.
    fn long_cfg(stream: u64) -> SimConfig {
        SimConfig {
            dt: 0.01,
            duration: 64_000.0,
            burn_in: 100.0,
            stride: 10,
            seed: 99,
            stream,
        }
    }

    #[test]
    fn classifies_weakly_damped() {
        let rec = simulate_weakly_damped(
            &WeaklyDampedParams {
                damping: 0.02,
                natural_freq: 0.3 * std::f64::consts::PI,
                noise_intensity: 0.01,
            },
            &long_cfg(0),
        )
        .unwrap();
        let report = classify(rec.channel("x").unwrap(), &DiagnosisConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::WeaklyDamped, "{report:?}");
        assert!(report.excess_kurtosis.abs() < 0.45);
        assert!((report.spike.peak_freq_hz - 0.15).abs() < 0.01);
    }

    #[test]
    fn classifies_limit_cycle() {
        let rec = simulate_limit_cycle(
            &LimitCycleParams {
                growth_rate: 0.01,
                frequency: 0.3 * std::f64::consts::PI,
                noise_intensity: 0.01,
            },
            &long_cfg(1),
        )
        .unwrap();
        let report = classify(rec.channel("x").unwrap(), &DiagnosisConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::LimitCycle, "{report:?}");
        assert!(report.spike.bw_ratio > 3.0);
        assert!(report.excess_kurtosis < -0.45);
    }

    #[test]
    fn classifies_forced() {
        let rec = simulate_forced(
            &ForcedParams {
                damping: 1.0,
                natural_freq: 0.2 * std::f64::consts::PI,
                forcing_amp: 0.1,
                forcing_freq: 0.3 * std::f64::consts::PI,
                noise_intensity: 0.01,
            },
            &long_cfg(2),
        )
        .unwrap();
        let report = classify(rec.channel("x").unwrap(), &DiagnosisConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Forced, "{report:?}");
        assert!(report.spike.bw_ratio <= 3.0);
        assert!(report.excess_kurtosis < -1.3);
    }

    #[test]
    fn classifies_white_noise_as_no_oscillation() {
        // Flat spectrum: no bin clears the peak-SNR threshold.
        let series = TimeSeries::new("x", 0.0, 0.1, gaussian_series(20_000, 42)).unwrap();
        let report = classify(&series, &DiagnosisConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoOscillation, "{report:?}");
        assert!(report.spike.peak_snr_db < 10.0, "{}", report.spike.peak_snr_db);
    }

    #[test]
    fn classifies_drift_noise_as_no_oscillation() {
        // A relaxation (low-pass) spectrum has a huge lowest-bin SNR over the
        // median but no isolated line; the quality gate must catch it.
        let rec = simulate_ornstein_uhlenbeck(
            &OrnsteinUhlenbeckParams {
                decay_rates: vec![1.0],
                noise_intensity: 0.01,
            },
            &SimConfig {
                duration: 2_000.0,
                ..long_cfg(3)
            },
        )
        .unwrap();
        let report = classify(rec.channel("u1").unwrap(), &DiagnosisConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoOscillation, "{report:?}");
        assert!(
            report.spike.half_power_bw_hz > report.spike.peak_freq_hz,
            "{:?}",
            report.spike
        );
    }

    #[test]
    fn classify_rejects_short_records_and_bad_config() {
        let series = TimeSeries::new("x", 0.0, 0.1, vec![0.0; 999]).unwrap();
        assert!(matches!(
            classify(&series, &DiagnosisConfig::default()),
            Err(Error::InsufficientData(_))
        ));
        let series = TimeSeries::new("x", 0.0, 0.1, gaussian_series(2000, 5)).unwrap();
        let bad = DiagnosisConfig {
            ci_level: 1.5,
            ..DiagnosisConfig::default()
        };
        assert!(classify(&series, &bad).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic_and_ordered() {
        let model = Model::WeaklyDamped(WeaklyDampedParams {
            damping: 0.02,
            natural_freq: 0.3 * std::f64::consts::PI,
            noise_intensity: 0.01,
        });
        let base = SimConfig {
            duration: 200.0,
            burn_in: 0.0,
            seed: 1,
            ..SimConfig::default()
        };
        let a = monte_carlo_kurtosis(&model, &base, 8, 0.9).unwrap();
        let b = monte_carlo_kurtosis(&model, &base, 8, 0.9).unwrap();
        assert_eq!(a, b);
        assert!(a.lower <= a.upper);
        assert_eq!(a.values.len(), 8);
        // Replicate i is keyed by stream, not by scheduling order.
        let single = monte_carlo_kurtosis(&model, &SimConfig { stream: 3, ..base.clone() }, 2, 0.9)
            .unwrap();
        assert_eq!(single.values[0], a.values[3]);
        assert!(monte_carlo_kurtosis(&model, &base, 1, 0.9).is_err());
    }
}
