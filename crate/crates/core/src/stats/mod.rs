//! Statistical signatures: moments, correlation, and spectra.

mod acf;
mod analytic;
mod kurtosis;
mod quantile;
mod welch;

pub use acf::{autocorrelation, autocovariance, envelope_correlation_time};
pub use analytic::{
    analytic_kurtosis_forced, analytic_kurtosis_limit_cycle, analytic_psd_forced,
    analytic_psd_limit_cycle, analytic_psd_weakly_damped, LimitCyclePsdInputs, SpectralLine,
};
pub use kurtosis::{excess_kurtosis, moving_kurtosis, KurtosisTrace};
pub use quantile::quantile;
pub use welch::{welch_psd, SpectrumEstimate, Taper, MIN_SEGMENT_LEN};

pub(crate) use kurtosis::excess_kurtosis_unchecked;
