//! Simulation and diagnosis of noisy oscillation mechanisms.
//!
//! A measured rhythm can come from qualitatively different machinery:
//! noise-sustained ringing of a damped mode, a self-sustained (limit-cycle)
//! oscillation, or an external periodic drive. This crate
//!
//! * simulates all three planar mechanisms plus an Ornstein–Uhlenbeck null
//!   model ([`models`]),
//! * measures the statistical signatures that separate them — excess
//!   kurtosis, autocorrelation, Welch spectra, and their closed-form
//!   references ([`stats`]),
//! * classifies a single channel by mechanism ([`classifier`]), and
//! * ranks multiple channels by signature strength to localize the source
//!   ([`localize`]),
//!
//! with CSV ingestion, measurement-noise injection, and run manifests in
//! [`io`]. The `oscillodx` binary exposes all of it on the command line.
//!
//! # Example
//!
//! ```
//! use oscillodx::models::{simulate_limit_cycle, LimitCycleParams, SimConfig};
//! use oscillodx::classifier::{classify, DiagnosisConfig, Verdict};
//!
//! let record = simulate_limit_cycle(
//!     &LimitCycleParams {
//!         growth_rate: 0.01,
//!         frequency: 0.3 * std::f64::consts::PI,
//!         noise_intensity: 0.01,
//!     },
//!     &SimConfig { duration: 64_000.0, ..SimConfig::default() },
//! )
//! .unwrap();
//! let report = classify(record.channel("x").unwrap(), &DiagnosisConfig::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::LimitCycle);
//! ```

pub mod classifier;
pub mod error;
pub mod io;
pub mod localize;
pub mod models;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use series::{MultiChannelRecord, TimeSeries};
