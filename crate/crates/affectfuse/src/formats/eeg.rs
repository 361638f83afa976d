//! EEG tables: a CSV with one header row of electrode names and one row per
//! sample (microvolts), plus a JSON sidecar `<stem>.meta.json` holding
//! `{"sample_rate_hz": 250.0}`. Without a sidecar the rate defaults to 250 Hz.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use affectfuse_core::dataset::{
    Channel, DatasetError, MultichannelSignal, EEG_SAMPLE_RATE_HZ,
};
use serde::{Deserialize, Serialize};

use super::FormatError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EegMeta {
    pub sample_rate_hz: f64,
}

impl Default for EegMeta {
    fn default() -> Self {
        Self {
            sample_rate_hz: EEG_SAMPLE_RATE_HZ,
        }
    }
}

/// `dir/name.csv` -> `dir/name.meta.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

fn read_meta(path: &Path) -> Result<EegMeta, FormatError> {
    let side = sidecar_path(path);
    if !side.exists() {
        return Ok(EegMeta::default());
    }
    let text = fs::read_to_string(&side).map_err(|e| FormatError::io(&side, e))?;
    serde_json::from_str(&text).map_err(|e| FormatError::parse(&side, e))
}

pub fn load_eeg(path: &Path) -> Result<MultichannelSignal, FormatError> {
    let meta = read_meta(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| FormatError::parse(path, e))?;
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| FormatError::parse(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if names.len() != Channel::COUNT {
        return Err(FormatError::ChannelCountMismatch {
            path: path.into(),
            found: names.len(),
        });
    }
    if let Some(name) = names.iter().find(|n| Channel::from_name(n).is_none()) {
        return Err(FormatError::UnknownChannel {
            path: path.into(),
            name: name.clone(),
        });
    }
    let mut columns = vec![Vec::new(); names.len()];
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| FormatError::parse(path, e))?;
        for ((field, column), name) in record.iter().zip(&mut columns).zip(&names) {
            let value = field.parse::<f64>().ok().filter(|v| v.is_finite());
            match value {
                Some(v) => column.push(v),
                None => {
                    return Err(FormatError::NonNumericSample {
                        path: path.into(),
                        row: row + 1,
                        column: name.clone(),
                        value: field.to_string(),
                    })
                }
            }
        }
    }
    MultichannelSignal::from_named_columns(&names, columns, meta.sample_rate_hz).map_err(|source| {
        match source {
            DatasetError::UnknownChannel(name) => FormatError::UnknownChannel {
                path: path.into(),
                name,
            },
            source => FormatError::Dataset {
                path: path.into(),
                source,
            },
        }
    })
}

/// Writes the table in canonical channel order plus its sidecar.
pub fn write_eeg(path: &Path, signal: &MultichannelSignal) -> Result<(), FormatError> {
    let mut out = String::new();
    out.push_str(&signal.channel_names().join(","));
    out.push('\n');
    let channels = signal.channels();
    for t in 0..signal.len() {
        for (i, c) in channels.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&c[t].to_string());
        }
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(|e| FormatError::io(path, e))?;
    file.write_all(out.as_bytes())
        .map_err(|e| FormatError::io(path, e))?;
    let meta = EegMeta {
        sample_rate_hz: signal.sample_rate_hz(),
    };
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(&meta).expect("plain struct");
    fs::write(&side, json + "\n").map_err(|e| FormatError::io(&side, e))
}
