//! Per-trial feature tables. Each trial gets three CSV files keyed by window:
//! `<stem>.eeg.csv` (17 EEG columns), `<stem>.music.csv` (37 music columns)
//! and `<stem>.labels.csv` (classes and music degeneracy flags). Every file
//! starts with `window_index,start_s`. Floats use shortest round-trip text.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use affectfuse_core::eeg::FEATURE_NAMES as EEG_NAMES;
use affectfuse_core::eval::WindowRecord;
use affectfuse_core::music::{DegeneracyFlags, FEATURE_NAMES as MUSIC_NAMES};

use super::FormatError;

pub const LABEL_COLUMNS: [&str; 5] = [
    "arousal_high",
    "valence_positive",
    "tempo_no_onsets",
    "attack_no_onsets",
    "flat_chroma",
];

const KEY_COLUMNS: [&str; 2] = ["window_index", "start_s"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureFiles {
    pub eeg: PathBuf,
    pub music: PathBuf,
    pub labels: PathBuf,
}

impl FeatureFiles {
    pub fn new(dir: &Path, stem: &str) -> Self {
        Self {
            eeg: dir.join(format!("{stem}.eeg.csv")),
            music: dir.join(format!("{stem}.music.csv")),
            labels: dir.join(format!("{stem}.labels.csv")),
        }
    }

    pub fn all_exist(&self) -> bool {
        [&self.eeg, &self.music, &self.labels]
            .iter()
            .all(|p| p.is_file())
    }
}

fn header(names: &[&str]) -> String {
    KEY_COLUMNS.iter().chain(names).copied().collect::<Vec<_>>().join(",")
}

fn table<F: Fn(&WindowRecord) -> Vec<String>>(names: &[&str], records: &[WindowRecord], row: F) -> String {
    let mut out = header(names);
    out.push('\n');
    for r in records {
        let _ = write!(out, "{},{}", r.window_index, r.start_s);
        for v in row(r) {
            out.push(',');
            out.push_str(&v);
        }
        out.push('\n');
    }
    out
}

fn bit(b: bool) -> String {
    String::from(if b { "1" } else { "0" })
}

fn write(path: &Path, text: String) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|e| FormatError::io(path, e))
}

pub fn write_trial_features(files: &FeatureFiles, records: &[WindowRecord]) -> Result<(), FormatError> {
    let floats = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>();
    write(&files.eeg, table(&EEG_NAMES, records, |r| floats(&r.eeg)))?;
    write(&files.music, table(&MUSIC_NAMES, records, |r| floats(&r.music)))?;
    write(
        &files.labels,
        table(&LABEL_COLUMNS, records, |r| {
            vec![
                bit(r.arousal_high),
                bit(r.valence_positive),
                bit(r.music_flags.tempo_no_onsets),
                bit(r.music_flags.attack_no_onsets),
                bit(r.music_flags.flat_chroma),
            ]
        }),
    )
}

/// Rows of `(window_index, start_s, values)`.
fn read_table(path: &Path, names: &[&str]) -> Result<Vec<(u32, f64, Vec<f64>)>, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let mut lines = text.lines();
    let expected = header(names);
    if lines.next() != Some(expected.as_str()) {
        return Err(FormatError::FeatureSchema {
            path: path.into(),
            expected,
        });
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let bad = || FormatError::parse(path, format!("row {}: `{line}`", n + 1));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() + KEY_COLUMNS.len() {
                return Err(bad());
            }
            let index = fields[0].parse().map_err(|_| bad())?;
            let start = fields[1].parse().map_err(|_| bad())?;
            let values = fields[2..]
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            Ok((index, start, values))
        })
        .collect()
}

/// Reassembles the window records written by [`write_trial_features`].
pub fn read_trial_features(
    files: &FeatureFiles,
    subject: u32,
    song: u32,
    trial: u32,
) -> Result<Vec<WindowRecord>, FormatError> {
    let eeg = read_table(&files.eeg, &EEG_NAMES)?;
    let music = read_table(&files.music, &MUSIC_NAMES)?;
    let labels = read_table(&files.labels, &LABEL_COLUMNS)?;
    if eeg.len() != music.len() || eeg.len() != labels.len() {
        return Err(FormatError::parse(&files.labels, "feature tables have different row counts"));
    }
    eeg.into_iter()
        .zip(music)
        .zip(labels)
        .map(|(((index, start_s, eeg), (mi, _, music)), (li, _, flags))| {
            if mi != index || li != index {
                return Err(FormatError::parse(&files.labels, "window indexes disagree across tables"));
            }
            let on = |i: usize| flags[i] != 0.0;
            Ok(WindowRecord {
                subject,
                song,
                trial,
                window_index: index,
                start_s,
                eeg,
                music,
                music_flags: DegeneracyFlags {
                    tempo_no_onsets: on(2),
                    attack_no_onsets: on(3),
                    flat_chroma: on(4),
                },
                arousal_high: on(0),
                valence_positive: on(1),
            })
        })
        .collect()
}
