//! CSV record format: a `time` column plus one column per channel.
//!
//! - Header row: `time,<label>,...` (labels must be unique and non-empty).
//! - Lines starting with `#` are comments.
//! - The time column must be a uniform grid: every successive difference
//!   within 1 ppm of the median difference.
//! - All values must parse as finite decimals.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{MultiChannelRecord, TimeSeries, TIMEBASE_TOLERANCE};
use crate::stats::{KurtosisTrace, SpectrumEstimate};

/// Reads a multi-channel record, validating the timebase.
pub fn read_record_csv(path: &Path) -> Result<MultiChannelRecord> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));

    let headers = reader
        .headers()
        .map_err(|e| Error::csv(Some(path), e.to_string()))?
        .clone();
    if headers.is_empty() || headers.get(0) != Some("time") {
        return Err(Error::csv(
            Some(path),
            format!(
                "first header field must be \"time\", got {:?}",
                headers.get(0).unwrap_or("")
            ),
        ));
    }
    if headers.len() < 2 {
        return Err(Error::csv(Some(path), "no channel columns after \"time\""));
    }
    let labels: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();

    let mut times: Vec<f64> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); labels.len()];
    for (row_idx, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::csv(Some(path), e.to_string()))?;
        if row.len() != headers.len() {
            return Err(Error::csv(
                Some(path),
                format!(
                    "row {}: expected {} fields, got {}",
                    row_idx + 2,
                    headers.len(),
                    row.len()
                ),
            ));
        }
        let parse = |field: &str, col: &str| -> Result<f64> {
            field.parse::<f64>().map_err(|_| {
                Error::csv(
                    Some(path),
                    format!("row {}, column {col}: cannot parse {field:?}", row_idx + 2),
                )
            })
        };
        times.push(parse(&row[0], "time")?);
        for (c, col) in columns.iter_mut().enumerate() {
            col.push(parse(&row[c + 1], &labels[c])?);
        }
    }

    if times.len() < 2 {
        return Err(Error::csv(
            Some(path),
            format!("need at least 2 data rows, got {}", times.len()),
        ));
    }

    let dt = uniform_step(&times)?;
    let t0 = times[0];
    let channels = labels
        .into_iter()
        .zip(columns)
        .map(|(label, samples)| TimeSeries::new(label, t0, dt, samples))
        .collect::<Result<Vec<_>>>()?;
    MultiChannelRecord::new(channels)
}

/// Validates that `times` is a uniform, increasing grid and returns its step
/// (the median difference).
fn uniform_step(times: &[f64]) -> Result<f64> {
    let mut diffs: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    diffs.sort_by(f64::total_cmp);
    let dt = diffs[diffs.len() / 2];
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::IrregularTimebase(format!(
            "median time step is {dt}; times must increase"
        )));
    }
    for (i, w) in times.windows(2).enumerate() {
        let d = w[1] - w[0];
        if (d - dt).abs() > TIMEBASE_TOLERANCE * dt {
            return Err(Error::IrregularTimebase(format!(
                "step between rows {} and {} is {d:.9e}, median is {dt:.9e} \
                 (tolerance 1 ppm); resample the record first",
                i + 2,
                i + 3
            )));
        }
    }
    Ok(dt)
}

/// Writes a record in the same format `read_record_csv` accepts. Floats are
/// emitted at shortest round-trip precision.
pub fn write_record_csv(path: &Path, record: &MultiChannelRecord) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let labels = record.labels().join(",");
    writeln!(out, "time,{labels}").map_err(|e| Error::io(path, e))?;
    for i in 0..record.len() {
        let mut line = format!("{}", record.channels()[0].time_at(i));
        for ch in record.channels() {
            line.push(',');
            line.push_str(&format!("{}", ch.samples[i]));
        }
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes a spectrum as `freq_hz,psd` with metadata in `#` comments.
pub fn write_spectrum_csv(path: &Path, spectrum: &SpectrumEstimate) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(
        out,
        "# resolution_bw_hz={} segments={} sample_rate_hz={}",
        spectrum.resolution_bw, spectrum.segments, spectrum.sample_rate
    )
    .map_err(|e| Error::io(path, e))?;
    writeln!(out, "freq_hz,psd").map_err(|e| Error::io(path, e))?;
    for (f, p) in spectrum.freqs.iter().zip(&spectrum.psd) {
        writeln!(out, "{f},{p}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes a moving-kurtosis trace as `time,excess_kurtosis`.
pub fn write_trace_csv(path: &Path, trace: &KurtosisTrace) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(
        out,
        "# window_s={} hop_s={}",
        trace.window_duration, trace.hop
    )
    .map_err(|e| Error::io(path, e))?;
    writeln!(out, "time,excess_kurtosis").map_err(|e| Error::io(path, e))?;
    for (t, v) in trace.times.iter().zip(&trace.values) {
        writeln!(out, "{t},{v}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rec.csv");
        std::fs::write(&path, content).unwrap();
        (dir, path)
    }

    #[test]
    fn roundtrip_preserves_values_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let record = MultiChannelRecord::new(vec![
            TimeSeries::new("a", 0.25, 0.125, vec![1.0 / 3.0, -2.5e-17, 7.25]).unwrap(),
            TimeSeries::new("b", 0.25, 0.125, vec![0.1, 0.2, 0.3]).unwrap(),
        ])
        .unwrap();
        write_record_csv(&path, &record).unwrap();
        let back = read_record_csv(&path).unwrap();
        assert_eq!(back.labels(), vec!["a", "b"]);
        assert_eq!(back.channel("a").unwrap().samples, record.channel("a").unwrap().samples);
        assert_eq!(back.dt(), 0.125);
        assert_eq!(back.t0(), 0.25);
    }

    #[test]
    fn accepts_comments_and_whitespace() {
        let (_d, path) = write_tmp(
            "# generated by a test\ntime, x , y\n0.0, 1.0, 4.0\n# midstream comment\n0.5, 2.0, 5.0\n1.0, 3.0, 6.0\n",
        );
        let rec = read_record_csv(&path).unwrap();
        assert_eq!(rec.labels(), vec!["x", "y"]);
        assert_eq!(rec.channel("y").unwrap().samples, vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn rejects_missing_time_header() {
        let (_d, path) = write_tmp("t,x\n0,1\n1,2\n");
        let err = read_record_csv(&path).unwrap_err();
        assert!(matches!(err, Error::CsvFormat { .. }), "{err}");
        assert!(err.is_parse_error());
    }

    #[test]
    fn rejects_jittered_timebase() {
        // Third step is off by 2 ppm.
        let (_d, path) = write_tmp("time,x\n0.0,1\n1.0,2\n2.0,3\n3.000002,4\n4.000002,5\n");
        assert!(matches!(
            read_record_csv(&path).unwrap_err(),
            Error::IrregularTimebase(_)
        ));
        // 1 ppm of jitter is within tolerance.
        let (_d2, path2) = write_tmp("time,x\n0.0,1\n1.0,2\n2.0000005,3\n3.0000005,4\n");
        assert!(read_record_csv(&path2).is_ok());
    }

    #[test]
    fn rejects_malformed_rows_and_values() {
        let (_d, path) = write_tmp("time,x\n0,1\n1\n");
        assert!(read_record_csv(&path).unwrap_err().is_parse_error());

        let (_d, path) = write_tmp("time,x\n0,1\n1,abc\n");
        assert!(read_record_csv(&path).unwrap_err().is_parse_error());

        let (_d, path) = write_tmp("time,x\n0,1\n");
        assert!(read_record_csv(&path).unwrap_err().is_parse_error());

        // NaN parses as a float but fails the finiteness contract.
        let (_d, path) = write_tmp("time,x\n0,1\n1,NaN\n2,3\n");
        assert!(matches!(
            read_record_csv(&path).unwrap_err(),
            Error::NonFinite(_)
        ));

        let (_d, path) = write_tmp("time,x,x\n0,1,2\n1,2,3\n");
        assert!(read_record_csv(&path).is_err());

        assert!(matches!(
            read_record_csv(Path::new("/nonexistent/nowhere.csv")).unwrap_err(),
            Error::Io { .. }
        ));
    }

    #[test]
    fn rejects_decreasing_times() {
        let (_d, path) = write_tmp("time,x\n2,1\n1,2\n0,3\n");
        assert!(matches!(
            read_record_csv(&path).unwrap_err(),
            Error::IrregularTimebase(_)
        ));
    }
}
