//! File formats and provenance: CSV records, measurement-noise injection,
//! and run manifests.

mod csv_io;
mod manifest;
mod noise;

pub use csv_io::{read_record_csv, write_record_csv, write_spectrum_csv, write_trace_csv};
pub use manifest::{manifest_path_for, sha256_hex_of_file, InputDigest, RunManifest};
pub use noise::{add_measurement_noise, NoiseSpec};
