//! Record ingestion and persistence.
//!
//! Two on-disk layouts are supported:
//!
//! - **CSV**: one row per time sample, two columns `ch_x,ch_y`, decimal-dot
//!   floats, no header. Sampling rate and label are supplied by the caller
//!   through the layout descriptor (the file carries no metadata).
//! - **Raw binary**: little-endian `f32`, interleaved `[x0, y0, x1, y1, ...]`,
//!   with a JSON sidecar manifest `<name>.json` holding `sample_rate_hz`,
//!   `label`, and `channels`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{HealthState, MultiSensorRecord};
use crate::{Error, Result};

/// Ingestion layout descriptor for [`load_record`].
#[derive(Debug, Clone)]
pub enum RecordLayout {
    /// Two-column headerless CSV; metadata comes from the descriptor.
    Csv { sample_rate_hz: f64, label: HealthState },
    /// Interleaved little-endian `f32` with a `<name>.json` sidecar manifest.
    RawF32,
}

/// Sidecar manifest for the raw binary layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawManifest {
    pub sample_rate_hz: f64,
    pub label: HealthState,
    pub channels: usize,
}

/// Path of the JSON sidecar manifest for a raw binary record file.
pub fn manifest_path(data_path: &Path) -> PathBuf {
    data_path.with_extension("json")
}

/// Load a two-channel record from disk.
pub fn load_record(path: &Path, layout: &RecordLayout) -> Result<MultiSensorRecord> {
    match layout {
        RecordLayout::Csv { sample_rate_hz, label } => load_csv(path, *sample_rate_hz, *label),
        RecordLayout::RawF32 => load_raw(path),
    }
}

fn source_id_for(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "record".into())
}

fn load_csv(path: &Path, sample_rate_hz: f64, label: HealthState) -> Result<MultiSensorRecord> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut ch0 = Vec::new();
    let mut ch1 = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let a = cols.next();
        let b = cols.next();
        let (a, b) = match (a, b, cols.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::parse(
                    path.display().to_string(),
                    format!("line {}: expected exactly 2 columns", lineno + 1),
                ))
            }
        };
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| {
                Error::parse(path.display().to_string(), format!("line {}: bad float '{s}'", lineno + 1))
            })
        };
        ch0.push(parse(a)?);
        ch1.push(parse(b)?);
    }
    MultiSensorRecord::new(ch0, ch1, sample_rate_hz, label, source_id_for(path))
}

fn load_raw(path: &Path) -> Result<MultiSensorRecord> {
    let mpath = manifest_path(path);
    let mtext = fs::read_to_string(&mpath).map_err(|e| Error::io(mpath.display().to_string(), e))?;
    let manifest: RawManifest = serde_json::from_str(&mtext)
        .map_err(|e| Error::parse(mpath.display().to_string(), e.to_string()))?;
    if manifest.channels != 2 {
        return Err(Error::parse(
            mpath.display().to_string(),
            format!("expected 2 channels, manifest says {}", manifest.channels),
        ));
    }

    let bytes = fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let frame = 4 * manifest.channels;
    if bytes.len() % frame != 0 {
        return Err(Error::parse(
            path.display().to_string(),
            format!("file size {} is not a multiple of the {frame}-byte frame", bytes.len()),
        ));
    }
    let n = bytes.len() / frame;
    let mut ch0 = Vec::with_capacity(n);
    let mut ch1 = Vec::with_capacity(n);
    for i in 0..n {
        let base = i * frame;
        let x = f32::from_le_bytes(bytes[base..base + 4].try_into().unwrap());
        let y = f32::from_le_bytes(bytes[base + 4..base + 8].try_into().unwrap());
        ch0.push(x as f64);
        ch1.push(y as f64);
    }
    MultiSensorRecord::new(ch0, ch1, manifest.sample_rate_hz, manifest.label, source_id_for(path))
}

/// Write a record in the CSV layout.
pub fn save_record_csv(record: &MultiSensorRecord, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    for i in 0..record.len() {
        writeln!(w, "{},{}", record.channel(0)[i], record.channel(1)[i])
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Write a record in the raw binary layout along with its sidecar manifest.
///
/// Samples are quantized to `f32`; loading what was saved and saving again
/// reproduces the file byte-for-byte.
pub fn save_record_raw(record: &MultiSensorRecord, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(record.len() * 8);
    for i in 0..record.len() {
        bytes.extend_from_slice(&(record.channel(0)[i] as f32).to_le_bytes());
        bytes.extend_from_slice(&(record.channel(1)[i] as f32).to_le_bytes());
    }
    fs::write(path, &bytes).map_err(|e| Error::io(path.display().to_string(), e))?;

    let manifest = RawManifest {
        sample_rate_hz: record.sample_rate_hz,
        label: record.label,
        channels: 2,
    };
    let mpath = manifest_path(path);
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::parse(mpath.display().to_string(), e.to_string()))?;
    fs::write(&mpath, text).map_err(|e| Error::io(mpath.display().to_string(), e))
}

/// Write a speed trace as `time_s,rpm` CSV with a header row.
pub fn save_speed_csv(trace: &super::SpeedTrace, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "time_s,rpm").map_err(|e| Error::io(path.display().to_string(), e))?;
    for (t, r) in trace.timestamps_s().iter().zip(trace.rpm()) {
        writeln!(w, "{t},{r}").map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load a speed trace from `time_s,rpm` CSV (header row optional).
pub fn load_speed_csv(path: &Path) -> Result<super::SpeedTrace> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut ts = Vec::new();
    let mut rpm = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("time_s")) {
            continue;
        }
        let mut cols = line.split(',');
        let (a, b) = match (cols.next(), cols.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::parse(
                    path.display().to_string(),
                    format!("line {}: expected 2 columns", lineno + 1),
                ))
            }
        };
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| {
                Error::parse(path.display().to_string(), format!("line {}: bad float '{s}'", lineno + 1))
            })
        };
        ts.push(parse(a)?);
        rpm.push(parse(b)?);
    }
    super::SpeedTrace::new(ts, rpm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn csv_round_trip_small() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("rec.csv");
        fs::write(&path, "1.0,2.0\n3.0,4.0\n5.0,6.0\n7.0,8.0\n").unwrap();
        let rec = load_record(
            &path,
            &RecordLayout::Csv { sample_rate_hz: 100.0, label: HealthState::Outer },
        )
        .unwrap();
        assert_eq!(rec.len(), 4);
        assert_eq!(rec.channel(0), &[1.0, 3.0, 5.0, 7.0]);
        assert_eq!(rec.channel(1), &[2.0, 4.0, 6.0, 8.0]);
        assert_eq!(rec.label, HealthState::Outer);
    }

    #[test]
    fn csv_unequal_columns_is_error() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "1.0,2.0\n3.0\n").unwrap();
        let err = load_record(
            &path,
            &RecordLayout::Csv { sample_rate_hz: 100.0, label: HealthState::Normal },
        );
        assert!(err.is_err());
    }

    #[test]
    fn raw_sixteen_bytes_is_two_samples() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("rec.bin");
        // 16 bytes / (4 bytes x 2 channels) = 2 samples.
        let mut bytes = Vec::new();
        for v in [1.0f32, -1.0, 0.5, 0.25] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fs::write(&path, &bytes).unwrap();
        let manifest = RawManifest { sample_rate_hz: 20_000.0, label: HealthState::Ball, channels: 2 };
        fs::write(path.with_extension("json"), serde_json::to_string(&manifest).unwrap()).unwrap();

        let rec = load_record(&path, &RecordLayout::RawF32).unwrap();
        assert_eq!(rec.len(), 2);
        assert_eq!(rec.channel(0), &[1.0, 0.5]);
        assert_eq!(rec.channel(1), &[-1.0, 0.25]);
        assert_eq!(rec.label, HealthState::Ball);
        assert_eq!(rec.sample_rate_hz, 20_000.0);
    }

    #[test]
    fn raw_round_trip_is_byte_exact_after_first_quantization() {
        let dir = tempdir().unwrap();
        let p1 = dir.path().join("a.bin");
        let p2 = dir.path().join("b.bin");
        let rec = MultiSensorRecord::new(
            vec![0.123456789, -2.5, 3.75],
            vec![1.5, 0.0, -0.0625],
            1000.0,
            HealthState::Inner,
            "a",
        )
        .unwrap();
        save_record_raw(&rec, &p1).unwrap();
        let loaded = load_record(&p1, &RecordLayout::RawF32).unwrap();
        save_record_raw(&loaded, &p2).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
        // f32-representable values survive the first round trip exactly.
        assert_eq!(loaded.channel(0)[1], -2.5);
        assert_eq!(loaded.channel(0)[2], 3.75);
        assert_eq!(loaded.channel(1)[2], -0.0625);
    }

    #[test]
    fn speed_csv_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("speed.csv");
        let trace = super::super::SpeedTrace::new(vec![0.0, 0.08, 0.16], vec![1200.0, 1210.0, 1195.0]).unwrap();
        save_speed_csv(&trace, &path).unwrap();
        let loaded = load_speed_csv(&path).unwrap();
        assert_eq!(trace, loaded);
    }
}
