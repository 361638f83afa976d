//! On-disk formats: dataset manifest, EEG tables, WAV audio, annotation
//! streams and per-trial feature tables.

mod annotation;
mod eeg;
mod features;
mod manifest;
mod wav;

use std::io;
use std::path::PathBuf;

use affectfuse_core::dataset::{DatasetError, Trial};

pub use annotation::{load_annotations, parse_annotations, write_annotations, ANNOTATION_HEADER};
pub use eeg::{load_eeg, sidecar_path, write_eeg, EegMeta};
pub use features::{read_trial_features, write_trial_features, FeatureFiles, LABEL_COLUMNS};
pub use manifest::{load_manifest, parse_manifest, DatasetManifest, SubjectRecord, TrialRef};
pub use wav::{load_wav, write_wav};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("trial {subject}/{song}: missing file {path}")]
    MissingTrialFile {
        subject: String,
        song: String,
        path: PathBuf,
    },
    #[error("subject `{0}` listed twice")]
    DuplicateSubject(String),
    #[error("subject `{subject}` has song `{song}` twice")]
    DuplicateTrial { subject: String, song: String },
    #[error("subject `{subject}`, song `{song}`: confidence {value} outside 1..=3")]
    InvalidConfidence {
        subject: String,
        song: String,
        value: i64,
    },
    #[error("{path}: unknown EEG channel `{name}`")]
    UnknownChannel { path: PathBuf, name: String },
    #[error("{path}: expected 12 EEG channels, found {found}")]
    ChannelCountMismatch { path: PathBuf, found: usize },
    #[error("{path}: non-numeric sample `{value}` in row {row}, column {column}")]
    NonNumericSample {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
    },
    #[error("{path}: unsupported audio encoding ({detail})")]
    UnsupportedEncoding { path: PathBuf, detail: String },
    #[error("{path}: corrupt WAV ({detail})")]
    CorruptHeader { path: PathBuf, detail: String },
    #[error("{path}: {source}")]
    Dataset {
        path: PathBuf,
        #[source]
        source: DatasetError,
    },
    #[error("{path}: unexpected columns, expected `{expected}`")]
    FeatureSchema { path: PathBuf, expected: String },
}

impl FormatError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        FormatError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        FormatError::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// Loads the EEG, audio and annotation files of one manifest entry.
pub fn load_trial(subject_id: &str, trial: &TrialRef) -> Result<Trial, FormatError> {
    Ok(Trial {
        subject_id: subject_id.to_string(),
        song_id: trial.song_id.clone(),
        eeg: load_eeg(&trial.eeg)?,
        audio: load_wav(&trial.audio)?,
        annotations: load_annotations(&trial.annotation)?,
    })
}
