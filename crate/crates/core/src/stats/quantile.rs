//! Linear-interpolation quantiles on sorted copies of the data.

use crate::error::{Error, Result};

/// Empirical quantile with linear interpolation between order statistics
/// (the common default in numerical libraries): for probability `p` the
/// fractional rank is `h = (n − 1)·p` and the result interpolates between
/// the floor and ceiling order statistics.
pub fn quantile(samples: &[f64], p: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("quantile of empty sample".into()));
    }
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "quantile probability must lie in [0, 1], got {p}"
        )));
    }
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("quantile input contains {bad}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    Ok(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_between_order_statistics() {
        let xs = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(quantile(&xs, 0.0).unwrap(), 1.0);
        assert_eq!(quantile(&xs, 1.0).unwrap(), 4.0);
        assert_eq!(quantile(&xs, 0.5).unwrap(), 2.5);
        // h = 3 * 0.25 = 0.75 → 1 + 0.75·(2−1)
        assert_eq!(quantile(&xs, 0.25).unwrap(), 1.75);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(quantile(&[], 0.5).is_err());
        assert!(quantile(&[1.0], -0.1).is_err());
        assert!(quantile(&[1.0], 1.5).is_err());
        assert!(quantile(&[1.0, f64::NAN], 0.5).is_err());
    }
}
