//! TOML dataset manifest.
//!
//! ```toml
//! [[subjects]]
//! subject_id = "S01"
//!
//! [[subjects.trials]]
//! song_id = "song01"
//! eeg = "eeg/S01_song01.csv"
//! audio = "audio/song01.wav"
//! annotation = "annotations/S01_song01.csv"
//! familiarity = 0
//! confidence = 2
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::FormatError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRef {
    pub song_id: String,
    pub eeg: PathBuf,
    pub audio: PathBuf,
    pub annotation: PathBuf,
    #[serde(default)]
    pub familiarity: i64,
    pub confidence: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectRecord {
    pub subject_id: String,
    #[serde(default)]
    pub trials: Vec<TrialRef>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    #[serde(default)]
    pub subjects: Vec<SubjectRecord>,
}

impl DatasetManifest {
    pub fn trial_count(&self) -> usize {
        self.subjects.iter().map(|s| s.trials.len()).sum()
    }

    /// `(subject, trial)` pairs in manifest order.
    pub fn trials(&self) -> impl Iterator<Item = (&SubjectRecord, &TrialRef)> {
        self.subjects
            .iter()
            .flat_map(|s| s.trials.iter().map(move |t| (s, t)))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest fields are TOML-representable")
    }
}

/// Parses and validates a manifest; relative paths are joined to `base_dir`.
/// File existence is not checked here.
pub fn parse_manifest(
    text: &str,
    base_dir: &Path,
    origin: &Path,
) -> Result<DatasetManifest, FormatError> {
    let mut manifest: DatasetManifest =
        toml::from_str(text).map_err(|e| FormatError::parse(origin, e.message()))?;
    let mut subjects = HashSet::new();
    for subject in &mut manifest.subjects {
        if !subjects.insert(subject.subject_id.clone()) {
            return Err(FormatError::DuplicateSubject(subject.subject_id.clone()));
        }
        let mut songs = HashSet::new();
        for trial in &mut subject.trials {
            if !songs.insert(trial.song_id.clone()) {
                return Err(FormatError::DuplicateTrial {
                    subject: subject.subject_id.clone(),
                    song: trial.song_id.clone(),
                });
            }
            if !(1..=3).contains(&trial.confidence) {
                return Err(FormatError::InvalidConfidence {
                    subject: subject.subject_id.clone(),
                    song: trial.song_id.clone(),
                    value: trial.confidence,
                });
            }
            for p in [&mut trial.eeg, &mut trial.audio, &mut trial.annotation] {
                if p.is_relative() {
                    *p = base_dir.join(&*p);
                }
            }
        }
    }
    Ok(manifest)
}

/// Reads, validates and checks that every referenced file exists.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let manifest = parse_manifest(&text, base, path)?;
    for (subject, trial) in manifest.trials() {
        for p in [&trial.eeg, &trial.audio, &trial.annotation] {
            if !p.is_file() {
                return Err(FormatError::MissingTrialFile {
                    subject: subject.subject_id.clone(),
                    song: trial.song_id.clone(),
                    path: p.clone(),
                });
            }
        }
    }
    Ok(manifest)
}
