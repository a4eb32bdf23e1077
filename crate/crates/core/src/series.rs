//! Uniformly sampled time series and multi-channel records.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance when checking that successive time stamps form a
/// uniform grid (1 ppm of the step).
pub const TIMEBASE_TOLERANCE: f64 = 1e-6;

/// A uniformly sampled scalar signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    /// Channel name (CSV column header).
    pub label: String,
    /// Time of the first sample, in seconds.
    pub t0: f64,
    /// Sample spacing, in seconds (strictly positive).
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, validating the timebase and sample finiteness.
    pub fn new(label: impl Into<String>, t0: f64, dt: f64, samples: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::InvalidParameter("channel label is empty".into()));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sample spacing must be finite and > 0, got {dt}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::NonFinite(format!("start time {t0}")));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "sample {i} of channel {label:?} is {}",
                samples[i]
            )));
        }
        Ok(Self {
            label,
            t0,
            dt,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sampling rate in Hz.
    pub fn sample_rate(&self) -> f64 {
        1.0 / self.dt
    }

    /// Time stamp of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Duration covered by the samples (last minus first time stamp).
    pub fn duration(&self) -> f64 {
        match self.samples.len() {
            0 => 0.0,
            n => (n - 1) as f64 * self.dt,
        }
    }

    /// Returns the sub-series with time stamps in `[start, end]` (inclusive
    /// on both ends, with half-a-step slack so grid-aligned bounds behave
    /// as expected).
    pub fn window(&self, start: f64, end: f64) -> Result<TimeSeries> {
        if !(start.is_finite() && end.is_finite()) || end <= start {
            return Err(Error::InvalidParameter(format!(
                "window bounds must be finite with start < end, got [{start}, {end}]"
            )));
        }
        let t_last = self.time_at(self.len().saturating_sub(1));
        if start < self.t0 - 0.5 * self.dt || end > t_last + 0.5 * self.dt {
            return Err(Error::WindowOutOfRange(format!(
                "[{start}, {end}] not contained in record span [{}, {}]",
                self.t0, t_last
            )));
        }
        let first = ((start - self.t0) / self.dt - 0.5).ceil().max(0.0) as usize;
        let last = (((end - self.t0) / self.dt + 0.5).floor() as usize).min(self.len() - 1);
        if last < first {
            return Err(Error::WindowOutOfRange(format!(
                "window [{start}, {end}] contains no samples"
            )));
        }
        TimeSeries::new(
            self.label.clone(),
            self.time_at(first),
            self.dt,
            self.samples[first..=last].to_vec(),
        )
    }
}

/// Channels sharing one timebase (equal `t0`, `dt`, and length).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiChannelRecord {
    channels: Vec<TimeSeries>,
}

impl MultiChannelRecord {
    pub fn new(channels: Vec<TimeSeries>) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::InvalidParameter("record has no channels".into()))?;
        let (t0, dt, len) = (first.t0, first.dt, first.len());
        for ch in &channels {
            let step_mismatch = (ch.dt - dt).abs() > TIMEBASE_TOLERANCE * dt;
            let origin_mismatch = (ch.t0 - t0).abs() > TIMEBASE_TOLERANCE * dt;
            if step_mismatch || origin_mismatch || ch.len() != len {
                return Err(Error::InvalidParameter(format!(
                    "channel {:?} does not share the record timebase",
                    ch.label
                )));
            }
        }
        for (i, a) in channels.iter().enumerate() {
            if channels[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate channel label {:?}",
                    a.label
                )));
            }
        }
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[TimeSeries] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<TimeSeries> {
        self.channels
    }

    pub fn labels(&self) -> Vec<&str> {
        self.channels.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn t0(&self) -> f64 {
        self.channels[0].t0
    }

    pub fn dt(&self) -> f64 {
        self.channels[0].dt
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, label: &str) -> Result<&TimeSeries> {
        self.channels
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownChannel(label.to_string()))
    }

    /// Applies [`TimeSeries::window`] to every channel.
    pub fn window(&self, start: f64, end: f64) -> Result<MultiChannelRecord> {
        let channels = self
            .channels
            .iter()
            .map(|c| c.window(start, end))
            .collect::<Result<Vec<_>>>()?;
        MultiChannelRecord::new(channels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(label: &str, n: usize) -> TimeSeries {
        TimeSeries::new(label, 0.0, 0.5, (0..n).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(TimeSeries::new("", 0.0, 0.1, vec![0.0]).is_err());
        assert!(TimeSeries::new("x", 0.0, 0.0, vec![0.0]).is_err());
        assert!(TimeSeries::new("x", 0.0, -0.1, vec![0.0]).is_err());
        assert!(TimeSeries::new("x", f64::NAN, 0.1, vec![0.0]).is_err());
        let err = TimeSeries::new("x", 0.0, 0.1, vec![0.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn window_selects_inclusive_grid_points() {
        let s = ramp("x", 11); // t = 0, 0.5, ..., 5.0
        let w = s.window(1.0, 3.0).unwrap();
        assert_eq!(w.t0, 1.0);
        assert_eq!(w.samples, vec![2.0, 3.0, 4.0, 5.0, 6.0]);

        // Bounds falling between grid points round inward.
        let w = s.window(0.8, 3.2).unwrap();
        assert_eq!(w.t0, 1.0);
        assert_eq!(w.len(), 5);
    }

    #[test]
    fn window_rejects_out_of_range_and_inverted() {
        let s = ramp("x", 11);
        assert!(matches!(
            s.window(-1.0, 2.0),
            Err(Error::WindowOutOfRange(_))
        ));
        assert!(matches!(s.window(1.0, 9.0), Err(Error::WindowOutOfRange(_))));
        assert!(s.window(3.0, 1.0).is_err());
    }

    #[test]
    fn record_enforces_shared_timebase_and_unique_labels() {
        let a = ramp("a", 5);
        let b = ramp("b", 5);
        assert!(MultiChannelRecord::new(vec![a.clone(), b.clone()]).is_ok());

        let short = ramp("c", 4);
        assert!(MultiChannelRecord::new(vec![a.clone(), short]).is_err());

        let shifted = TimeSeries::new("d", 1.0, 0.5, vec![0.0; 5]).unwrap();
        assert!(MultiChannelRecord::new(vec![a.clone(), shifted]).is_err());

        let dup = ramp("a", 5);
        assert!(MultiChannelRecord::new(vec![a, dup]).is_err());
        assert!(MultiChannelRecord::new(vec![]).is_err());
    }

    #[test]
    fn record_channel_lookup() {
        let rec = MultiChannelRecord::new(vec![ramp("a", 5), ramp("b", 5)]).unwrap();
        assert_eq!(rec.channel("b").unwrap().label, "b");
        assert!(matches!(rec.channel("z"), Err(Error::UnknownChannel(_))));
    }
}
