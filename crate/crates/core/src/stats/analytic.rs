//! Closed-form spectra and kurtosis values for the generative models, used
//! as references when validating estimators and classifying mechanisms.
//!
//! All spectra are one-sided densities over frequency in Hz: a two-sided
//! density S₂(ω) over angular frequency becomes S₁(f) = 4π·S₂(2πf), so that
//! `∫₀^∞ S₁ df` equals the process variance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ForcedParams, LimitCycleParams, WeaklyDampedParams};

fn check_freqs(freqs_hz: &[f64]) -> Result<()> {
    if let Some(f) = freqs_hz.iter().find(|f| !f.is_finite() || **f < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frequencies must be finite and >= 0, got {f}"
        )));
    }
    Ok(())
}

/// Stationary PSD of the weakly damped model,
/// S₂(ω) = σ²(γ² + ω₀² + ω²) / (2π[(γ² + ω₀² − ω²)² + 4γ²ω²]),
/// evaluated one-sided at the given frequencies (Hz). Total power σ²/(2γ).
pub fn analytic_psd_weakly_damped(
    params: &WeaklyDampedParams,
    freqs_hz: &[f64],
) -> Result<Vec<f64>> {
    if !(params.damping > 0.0 && params.damping.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "damping must be > 0, got {}",
            params.damping
        )));
    }
    if !(params.natural_freq >= 0.0 && params.natural_freq.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "natural_freq must be >= 0, got {}",
            params.natural_freq
        )));
    }
    check_freqs(freqs_hz)?;
    let g2 = params.damping * params.damping;
    let w02 = params.natural_freq * params.natural_freq;
    let s2 = params.noise_intensity * params.noise_intensity;
    Ok(freqs_hz
        .iter()
        .map(|f| {
            let w = 2.0 * std::f64::consts::PI * f;
            let w2 = w * w;
            let denom = (g2 + w02 - w2).powi(2) + 4.0 * g2 * w2;
            // One-sided: 4π × the two-sided form, cancelling its 1/2π.
            2.0 * s2 * (g2 + w02 + w2) / denom
        })
        .collect())
}

/// Free inputs for the limit-cycle spectrum: the composition
/// x = (r₀ + p)·cos φ with squared radius `radius_sq = r₀²`, amplitude
/// fluctuations of variance `amp_variance` relaxing at `amp_relax_rate`,
/// and phase diffusing at `phase_diffusion` rad²/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCyclePsdInputs {
    pub radius_sq: f64,
    /// Phase diffusion rate D (rad²/s); sets the intrinsic linewidth D/2π Hz.
    pub phase_diffusion: f64,
    /// Variance of the amplitude fluctuation p.
    pub amp_variance: f64,
    /// Relaxation rate of p (1/s).
    pub amp_relax_rate: f64,
    /// Cycle rotation rate ω (rad/s).
    pub frequency: f64,
}

impl LimitCyclePsdInputs {
    /// Derives the composition from the Hopf normal-form parameters:
    /// r₀² = γ, D = σ²/γ, Var[p] = σ²/4γ, amplitude relaxation 2γ.
    pub fn from_params(params: &LimitCycleParams) -> Self {
        let g = params.growth_rate;
        let s2 = params.noise_intensity * params.noise_intensity;
        Self {
            radius_sq: g,
            phase_diffusion: s2 / g,
            amp_variance: s2 / (4.0 * g),
            amp_relax_rate: 2.0 * g,
            frequency: params.frequency,
        }
    }
}

/// Normalized phase-diffused line shape: a Lorentzian pair at ±ω̄ with full
/// width D at half maximum, `∫ F dω = 1/2` (two-sided).
fn phase_diffused_line(d: f64, center: f64, omega: f64) -> f64 {
    let half = 0.5 * d;
    let a = omega - center;
    let b = omega + center;
    d / (8.0 * std::f64::consts::PI) * (1.0 / (a * a + half * half) + 1.0 / (b * b + half * half))
}

/// Stationary PSD of the limit-cycle composition, one-sided at `freqs_hz`:
/// S₂(ω) = r₀²·F(D, ω̄, ω) + Var[p]·F(D + 2λ, ω̄, ω), total power
/// (r₀² + Var[p])/2.
pub fn analytic_psd_limit_cycle(
    inputs: &LimitCyclePsdInputs,
    freqs_hz: &[f64],
) -> Result<Vec<f64>> {
    for (name, v, strict) in [
        ("radius_sq", inputs.radius_sq, false),
        ("phase_diffusion", inputs.phase_diffusion, true),
        ("amp_variance", inputs.amp_variance, false),
        ("amp_relax_rate", inputs.amp_relax_rate, false),
        ("frequency", inputs.frequency, true),
    ] {
        if !v.is_finite() || v < 0.0 || (strict && v == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be finite and {} 0, got {v}",
                if strict { ">" } else { ">=" }
            )));
        }
    }
    check_freqs(freqs_hz)?;
    let broad_width = inputs.phase_diffusion + 2.0 * inputs.amp_relax_rate;
    Ok(freqs_hz
        .iter()
        .map(|f| {
            let w = 2.0 * std::f64::consts::PI * f;
            let line = inputs.radius_sq * phase_diffused_line(inputs.phase_diffusion, inputs.frequency, w);
            let pedestal = inputs.amp_variance * phase_diffused_line(broad_width, inputs.frequency, w);
            4.0 * std::f64::consts::PI * (line + pedestal)
        })
        .collect())
}

/// A discrete spectral line: a δ contribution the continuous density cannot
/// carry, reported as total power at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub freq_hz: f64,
    pub power: f64,
}

/// Stationary PSD of the forced model: the weakly damped continuous
/// background plus a line of power ρ²/2 at the drive frequency.
pub fn analytic_psd_forced(
    params: &ForcedParams,
    freqs_hz: &[f64],
) -> Result<(Vec<f64>, SpectralLine)> {
    if !(params.forcing_freq > 0.0 && params.forcing_freq.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "forcing_freq must be > 0, got {}",
            params.forcing_freq
        )));
    }
    if !(params.forcing_amp >= 0.0 && params.forcing_amp.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "forcing_amp must be >= 0, got {}",
            params.forcing_amp
        )));
    }
    let background = analytic_psd_weakly_damped(
        &WeaklyDampedParams {
            damping: params.damping,
            natural_freq: params.natural_freq,
            noise_intensity: params.noise_intensity,
        },
        freqs_hz,
    )?;
    let rho = params.response_amplitude();
    Ok((
        background,
        SpectralLine {
            freq_hz: params.forcing_freq / (2.0 * std::f64::consts::PI),
            power: 0.5 * rho * rho,
        },
    ))
}

/// Excess kurtosis of x = (r₀ + p)·cos φ with r₀² = `radius_sq` and
/// Gaussian amplitude fluctuations of variance `amp_variance`:
///
/// k = −3·[(r₀² − v)² − 2v²] / (2·(r₀² + v)²)
///
/// Runs from −3/2 (rigid cycle, v → 0) through 0 at r₀²/v = 1 + √2 to +3/2
/// (amplitude-noise dominated).
pub fn analytic_kurtosis_limit_cycle(radius_sq: f64, amp_variance: f64) -> Result<f64> {
    if !(radius_sq.is_finite() && radius_sq >= 0.0) || !(amp_variance.is_finite() && amp_variance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius_sq and amp_variance must be finite and >= 0, got {radius_sq}, {amp_variance}"
        )));
    }
    let total = radius_sq + amp_variance;
    if total <= 0.0 {
        return Err(Error::DegenerateVariance(
            "limit-cycle kurtosis with zero radius and zero amplitude variance".into(),
        ));
    }
    let diff = radius_sq - amp_variance;
    Ok(-3.0 * (diff * diff - 2.0 * amp_variance * amp_variance) / (2.0 * total * total))
}

/// Excess kurtosis of x = ρ·cos Ωt + Gaussian fluctuation of variance v:
/// k = −(3/2) / (1 + 2v/ρ²)². Tends to 0 as the line is buried in noise.
pub fn analytic_kurtosis_forced(response_amp: f64, fluct_variance: f64) -> Result<f64> {
    if !(response_amp.is_finite() && response_amp >= 0.0)
        || !(fluct_variance.is_finite() && fluct_variance >= 0.0)
    {
        return Err(Error::InvalidParameter(format!(
            "response_amp and fluct_variance must be finite and >= 0, got {response_amp}, {fluct_variance}"
        )));
    }
    if response_amp == 0.0 {
        if fluct_variance == 0.0 {
            return Err(Error::DegenerateVariance(
                "forced kurtosis with zero line and zero fluctuation".into(),
            ));
        }
        return Ok(0.0);
    }
    let u = fluct_variance / (response_amp * response_amp);
    Ok(-1.5 / (1.0 + 2.0 * u).powi(2))
}
