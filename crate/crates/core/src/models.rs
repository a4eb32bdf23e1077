//! Stochastic oscillation models and their fixed-step integrator.
//!
//! Four generative models, all driven by independent white noise through an
//! Euler–Maruyama scheme with step `dt`:
//!
//! * **Ornstein–Uhlenbeck** — one or more independent relaxation channels
//!   `du_i = −α_i u_i dt + σ dW_i`; the "no oscillation" null model.
//! * **Weakly damped** — planar linear oscillator
//!   `dx = (−γx − ω₀y) dt + σ dW₁`, `dy = (ω₀x − γy) dt + σ dW₂`;
//!   noise-sustained ringing below threshold.
//! * **Limit cycle** — Hopf normal form above threshold,
//!   `dx = (γx − ω_h y − r²x) dt + σ dW₁`, `dy = (ω_h x + γy − r²y) dt + σ dW₂`
//!   with `r² = x² + y²`; a self-sustained cycle of radius `√γ`.
//! * **Forced** — the weakly damped system plus a rotating external drive
//!   `F·(cos Ωt, sin Ωt)`.
//!
//! Reproducibility: every run is keyed by `(seed, stream)`. The same pair
//! always yields the same samples; Monte-Carlo drivers give replicate `i`
//! stream `i` so runs are independent yet addressable.
//!
//! The forced integrator with `forcing_amp = 0` performs bit-for-bit the same
//! arithmetic as the weakly damped one — both delegate to one linear stepper —
//! so the forced model reduces *exactly* to the weakly damped model, not just
//! statistically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{MultiChannelRecord, TimeSeries};

/// Integration and recording plan shared by all models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Integrator step, seconds.
    pub dt: f64,
    /// Recorded span, seconds (after burn-in).
    pub duration: f64,
    /// Span integrated and discarded before recording starts, seconds.
    pub burn_in: f64,
    /// Record every `stride`-th integrator step (output spacing `stride·dt`).
    pub stride: usize,
    /// Base RNG seed.
    pub seed: u64,
    /// Replicate index; `(seed, stream)` fully determines the noise path.
    pub stream: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            duration: 600.0,
            burn_in: 100.0,
            stride: 10,
            seed: 0,
            stream: 0,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be finite and > 0, got {}",
                self.dt
            )));
        }
        if !(self.duration.is_finite() && self.duration >= self.dt) {
            return Err(Error::InvalidParameter(format!(
                "duration must be at least one step ({}), got {}",
                self.dt, self.duration
            )));
        }
        if !(self.burn_in.is_finite() && self.burn_in >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "burn_in must be finite and >= 0, got {}",
                self.burn_in
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be >= 1".into()));
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Total integrator steps, burn-in steps, and recorded-sample count.
    fn plan(&self) -> (usize, usize, usize) {
        let total = ((self.duration + self.burn_in) / self.dt).round() as usize;
        let burn = (self.burn_in / self.dt).round() as usize;
        // Steps 1..=total are integrated; step `s` is recorded when
        // `s >= max(burn, 1)` and `(s - burn) % stride == 0`.
        let first = burn.max(if burn == 0 { self.stride } else { 0 });
        let count = if total >= first {
            (total - first) / self.stride + 1
        } else {
            0
        };
        (total, burn, count)
    }

    /// Spacing of recorded samples, seconds.
    pub fn output_dt(&self) -> f64 {
        self.dt * self.stride as f64
    }
}

/// `du_i = −α_i u_i dt + σ dW_i` per channel, independent noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrnsteinUhlenbeckParams {
    /// Relaxation rate α_i per channel; all strictly positive.
    pub decay_rates: Vec<f64>,
    /// Noise scale σ (units of state per √second).
    pub noise_intensity: f64,
}

/// `dx = (−γx − ω₀y) dt + σ dW₁`, `dy = (ω₀x − γy) dt + σ dW₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeaklyDampedParams {
    /// Damping rate γ > 0 (1/s).
    pub damping: f64,
    /// Rotation rate ω₀ > 0 (rad/s).
    pub natural_freq: f64,
    /// Noise scale σ ≥ 0.
    pub noise_intensity: f64,
}

/// Hopf normal form above threshold; cycle radius `√growth_rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCycleParams {
    /// Linear growth rate γ > 0 (1/s); amplitude relaxes at rate 2γ.
    pub growth_rate: f64,
    /// Rotation rate ω_h > 0 (rad/s).
    pub frequency: f64,
    /// Noise scale σ ≥ 0.
    pub noise_intensity: f64,
}

/// Weakly damped system plus a rotating drive `F·(cos Ωt, sin Ωt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcedParams {
    /// Damping rate γ > 0 (1/s).
    pub damping: f64,
    /// Natural rotation rate ω₀ > 0 (rad/s).
    pub natural_freq: f64,
    /// Drive amplitude F ≥ 0.
    pub forcing_amp: f64,
    /// Drive rate Ω > 0 (rad/s).
    pub forcing_freq: f64,
    /// Noise scale σ ≥ 0.
    pub noise_intensity: f64,
}

impl ForcedParams {
    /// Steady-state response amplitude `ρ = F / √(γ² + (ω₀ − Ω)²)` of the
    /// driven linear system.
    pub fn response_amplitude(&self) -> f64 {
        let detune = self.natural_freq - self.forcing_freq;
        self.forcing_amp / (self.damping * self.damping + detune * detune).sqrt()
    }
}

/// Any generative model, for drivers that dispatch on a runtime choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    OrnsteinUhlenbeck(OrnsteinUhlenbeckParams),
    WeaklyDamped(WeaklyDampedParams),
    LimitCycle(LimitCycleParams),
    Forced(ForcedParams),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::OrnsteinUhlenbeck(_) => "ornstein_uhlenbeck",
            Model::WeaklyDamped(_) => "weakly_damped",
            Model::LimitCycle(_) => "limit_cycle",
            Model::Forced(_) => "forced",
        }
    }
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    require_finite(name, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
    }
}

fn require_non_negative(name: &str, v: f64) -> Result<()> {
    require_finite(name, v)?;
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")))
    }
}

/// The discrete linear map `z ← (1 − γdt ± iωdt) z` contracts only when
/// `(1 − γdt)² + (ωdt)² < 1`; outside that disc Euler–Maruyama diverges.
fn check_planar_stability(damping: f64, rotation: f64, dt: f64) -> Result<()> {
    let c2 = (1.0 - damping * dt).powi(2) + (rotation * dt).powi(2);
    if c2 < 1.0 {
        Ok(())
    } else {
        Err(Error::UnstableIntegration(format!(
            "dt = {dt} cannot resolve damping {damping} at rotation rate {rotation} \
             (discrete map gain {:.4} >= 1); reduce dt below {:.3e}",
            c2.sqrt(),
            2.0 * damping / (damping * damping + rotation * rotation),
        )))
    }
}

fn ensure_recordable(count: usize) -> Result<()> {
    if count < 2 {
        Err(Error::InsufficientData(format!(
            "recording plan yields {count} samples; need at least 2 \
             (increase duration or decrease stride)"
        )))
    } else {
        Ok(())
    }
}

/// Shared stepper for the weakly damped and forced models. The weakly damped
/// model is the `forcing_amp = 0` case; running it through the same arithmetic
/// keeps the reduction exact down to the last bit.
fn simulate_linear(
    damping: f64,
    natural_freq: f64,
    noise_intensity: f64,
    forcing_amp: f64,
    forcing_freq: f64,
    cfg: &SimConfig,
) -> Result<MultiChannelRecord> {
    cfg.validate()?;
    check_planar_stability(damping, natural_freq, cfg.dt)?;
    let (total, burn, count) = cfg.plan();
    ensure_recordable(count)?;

    let mut rng = cfg.rng();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();
    let (mut x, mut y) = (0.0_f64, 0.0_f64);
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);

    for step in 1..=total {
        let t = (step - 1) as f64 * dt;
        let phase = forcing_freq * t;
        let fx = forcing_amp * phase.cos();
        let fy = forcing_amp * phase.sin();
        let nx: f64 = StandardNormal.sample(&mut rng);
        let ny: f64 = StandardNormal.sample(&mut rng);
        let x1 = x + (-damping * x - natural_freq * y + fx) * dt + noise_intensity * sqrt_dt * nx;
        let y1 = y + (natural_freq * x - damping * y + fy) * dt + noise_intensity * sqrt_dt * ny;
        x = x1;
        y = y1;
        if step >= burn.max(1) && (step - burn) % cfg.stride == 0 {
            xs.push(x);
            ys.push(y);
        }
    }

    planar_record(cfg, xs, ys)
}

fn planar_record(cfg: &SimConfig, xs: Vec<f64>, ys: Vec<f64>) -> Result<MultiChannelRecord> {
    let out_dt = cfg.output_dt();
    MultiChannelRecord::new(vec![
        TimeSeries::new("x", 0.0, out_dt, xs)?,
        TimeSeries::new("y", 0.0, out_dt, ys)?,
    ])
}

/// Simulates the weakly damped model; returns channels `x`, `y`.
pub fn simulate_weakly_damped(
    params: &WeaklyDampedParams,
    cfg: &SimConfig,
) -> Result<MultiChannelRecord> {
    require_positive("damping", params.damping)?;
    require_positive("natural_freq", params.natural_freq)?;
    require_non_negative("noise_intensity", params.noise_intensity)?;
    simulate_linear(
        params.damping,
        params.natural_freq,
        params.noise_intensity,
        0.0,
        0.0,
        cfg,
    )
}

/// Simulates the forced model; returns channels `x`, `y`.
pub fn simulate_forced(params: &ForcedParams, cfg: &SimConfig) -> Result<MultiChannelRecord> {
    require_positive("damping", params.damping)?;
    require_positive("natural_freq", params.natural_freq)?;
    require_non_negative("forcing_amp", params.forcing_amp)?;
    require_positive("forcing_freq", params.forcing_freq)?;
    require_non_negative("noise_intensity", params.noise_intensity)?;
    simulate_linear(
        params.damping,
        params.natural_freq,
        params.noise_intensity,
        params.forcing_amp,
        params.forcing_freq,
        cfg,
    )
}

/// Simulates the limit-cycle model from the deterministic cycle point
/// `(√γ, 0)`; returns channels `x`, `y`.
pub fn simulate_limit_cycle(
    params: &LimitCycleParams,
    cfg: &SimConfig,
) -> Result<MultiChannelRecord> {
    require_positive("growth_rate", params.growth_rate)?;
    require_positive("frequency", params.frequency)?;
    require_non_negative("noise_intensity", params.noise_intensity)?;
    cfg.validate()?;
    // Amplitude relaxes toward the cycle at rate 2γ.
    check_planar_stability(2.0 * params.growth_rate, params.frequency, cfg.dt)?;
    let (total, burn, count) = cfg.plan();
    ensure_recordable(count)?;

    let mut rng = cfg.rng();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();
    let (gamma, omega, sigma) = (params.growth_rate, params.frequency, params.noise_intensity);
    let (mut x, mut y) = (gamma.sqrt(), 0.0_f64);
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);

    for step in 1..=total {
        let r2 = x * x + y * y;
        let nx: f64 = StandardNormal.sample(&mut rng);
        let ny: f64 = StandardNormal.sample(&mut rng);
        let x1 = x + (gamma * x - omega * y - r2 * x) * dt + sigma * sqrt_dt * nx;
        let y1 = y + (omega * x + gamma * y - r2 * y) * dt + sigma * sqrt_dt * ny;
        x = x1;
        y = y1;
        // The cubic term can overflow under extreme noise/step combinations;
        // fail loudly instead of emitting NaNs.
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::UnstableIntegration(format!(
                "state diverged at t = {:.6}; reduce dt or noise_intensity",
                step as f64 * dt
            )));
        }
        if step >= burn.max(1) && (step - burn) % cfg.stride == 0 {
            xs.push(x);
            ys.push(y);
        }
    }

    planar_record(cfg, xs, ys)
}

/// Simulates independent Ornstein–Uhlenbeck channels `u1..uN`, one per decay
/// rate, all starting from 0 and sharing `noise_intensity`.
pub fn simulate_ornstein_uhlenbeck(
    params: &OrnsteinUhlenbeckParams,
    cfg: &SimConfig,
) -> Result<MultiChannelRecord> {
    if params.decay_rates.is_empty() {
        return Err(Error::InvalidParameter("decay_rates is empty".into()));
    }
    for (i, &a) in params.decay_rates.iter().enumerate() {
        require_positive(&format!("decay_rates[{i}]"), a)?;
    }
    require_non_negative("noise_intensity", params.noise_intensity)?;
    cfg.validate()?;
    for (i, &a) in params.decay_rates.iter().enumerate() {
        if (1.0 - a * cfg.dt).abs() >= 1.0 {
            return Err(Error::UnstableIntegration(format!(
                "dt = {} cannot resolve decay_rates[{i}] = {a}; reduce dt below {:.3e}",
                cfg.dt,
                2.0 / a
            )));
        }
    }
    let (total, burn, count) = cfg.plan();
    ensure_recordable(count)?;

    let mut rng = cfg.rng();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();
    let dims = params.decay_rates.len();
    let sigma = params.noise_intensity;
    let mut state = vec![0.0_f64; dims];
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(count); dims];

    for step in 1..=total {
        for (d, u) in state.iter_mut().enumerate() {
            let xi: f64 = StandardNormal.sample(&mut rng);
            *u += -params.decay_rates[d] * *u * dt + sigma * sqrt_dt * xi;
        }
        if step >= burn.max(1) && (step - burn) % cfg.stride == 0 {
            for (d, u) in state.iter().enumerate() {
                out[d].push(*u);
            }
        }
    }

    let out_dt = cfg.output_dt();
    let channels = out
        .into_iter()
        .enumerate()
        .map(|(d, samples)| TimeSeries::new(format!("u{}", d + 1), 0.0, out_dt, samples))
        .collect::<Result<Vec<_>>>()?;
    MultiChannelRecord::new(channels)
}

/// Dispatches to the model-specific simulator.
pub fn simulate(model: &Model, cfg: &SimConfig) -> Result<MultiChannelRecord> {
    match model {
        Model::OrnsteinUhlenbeck(p) => simulate_ornstein_uhlenbeck(p, cfg),
        Model::WeaklyDamped(p) => simulate_weakly_damped(p, cfg),
        Model::LimitCycle(p) => simulate_limit_cycle(p, cfg),
        Model::Forced(p) => simulate_forced(p, cfg),
    }
}
