//! Feature extraction for every trial of a manifest with a content-hash cache.
//!
//! Outputs for one window size live in `<features>/w<window>s/` (with an
//! `_h<hop>s` suffix for overlapping windows). Next to each trial's tables a
//! `<stem>.hash` file records a SHA-256 digest of the input files and the
//! extraction settings; a trial whose digest matches is read back instead of
//! recomputed.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use affectfuse_core::eeg::EegFeatureConfig;
use affectfuse_core::eval::{extract_trial_records, Executor, FeatureDataset, FeatureError, WindowRecord};
use affectfuse_core::music::FrameConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::formats::{
    load_trial, read_trial_features, sidecar_path, write_trial_features, DatasetManifest,
    FeatureFiles, FormatError,
};

/// Bumped whenever the feature definitions change so stale caches are ignored.
const CACHE_VERSION: &str = "affectfuse-features-1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractSettings {
    pub window_s: f64,
    /// Defaults to the window length.
    pub hop_s: Option<f64>,
    pub eeg: EegFeatureConfig,
    pub frames: FrameConfig,
}

impl ExtractSettings {
    pub fn new(window_s: f64) -> Self {
        Self {
            window_s,
            hop_s: None,
            eeg: EegFeatureConfig::default(),
            frames: FrameConfig::default(),
        }
    }

    pub fn hop(&self) -> f64 {
        self.hop_s.unwrap_or(self.window_s)
    }

    pub fn dir_name(&self) -> String {
        match self.hop_s {
            Some(h) if h != self.window_s => format!("w{}s_h{}s", self.window_s, h),
            _ => format!("w{}s", self.window_s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Extracted,
    Cached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    /// `subject/song`.
    pub trial_id: String,
    pub status: CacheStatus,
    pub windows: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum TrialFailure {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error("trial {trial_id}: {source}")]
    Trial {
        trial_id: String,
        #[source]
        source: TrialFailure,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl ExtractError {
    pub fn trial_id(&self) -> Option<&str> {
        match self {
            ExtractError::Trial { trial_id, .. } => Some(trial_id),
            ExtractError::Format(_) => None,
        }
    }
}

/// File-name-safe `subject__song`.
pub fn trial_stem(subject_id: &str, song_id: &str) -> String {
    let clean = |s: &str| {
        s.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect::<String>()
    };
    format!("{}__{}", clean(subject_id), clean(song_id))
}

fn hash_file(hasher: &mut Sha256, path: &Path) -> Result<(), FormatError> {
    let bytes = fs::read(path).map_err(|e| FormatError::io(path, e))?;
    hasher.update((bytes.len() as u64).to_le_bytes());
    hasher.update(&bytes);
    Ok(())
}

fn input_digest(
    inputs: &[&Path],
    settings: &ExtractSettings,
    ids: [u32; 3],
) -> Result<String, FormatError> {
    let mut h = Sha256::new();
    h.update(CACHE_VERSION.as_bytes());
    h.update(serde_json::to_vec(settings).expect("plain settings"));
    for id in ids {
        h.update(id.to_le_bytes());
    }
    for p in inputs {
        hash_file(&mut h, p)?;
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

struct Job<'a> {
    subject_id: &'a str,
    song_id: &'a str,
    trial: &'a crate::formats::TrialRef,
    ids: [u32; 3],
}

fn run_job(job: &Job<'_>, dir: &Path, settings: &ExtractSettings) -> Result<(Vec<WindowRecord>, CacheStatus), TrialFailure> {
    let t = job.trial;
    let side = sidecar_path(&t.eeg);
    let mut inputs = vec![t.eeg.as_path(), t.audio.as_path(), t.annotation.as_path()];
    if side.exists() {
        inputs.push(side.as_path());
    }
    for p in &inputs {
        if !p.is_file() {
            return Err(FormatError::MissingFile(p.to_path_buf()).into());
        }
    }
    let digest = input_digest(&inputs, settings, job.ids)?;
    let stem = trial_stem(job.subject_id, job.song_id);
    let files = FeatureFiles::new(dir, &stem);
    let hash_path = dir.join(format!("{stem}.hash"));
    let [subject, song, trial_index] = job.ids;
    if files.all_exist() && fs::read_to_string(&hash_path).ok().as_deref() == Some(digest.as_str()) {
        if let Ok(records) = read_trial_features(&files, subject, song, trial_index) {
            return Ok((records, CacheStatus::Cached));
        }
    }
    let trial = load_trial(job.subject_id, t)?;
    let records = extract_trial_records(
        &trial,
        subject,
        song,
        trial_index,
        settings.window_s,
        settings.hop(),
        &settings.eeg,
        &settings.frames,
    )?;
    write_trial_features(&files, &records)?;
    fs::write(&hash_path, &digest).map_err(|e| FormatError::io(&hash_path, e))?;
    Ok((records, CacheStatus::Extracted))
}

/// Extracts (or reloads) every trial at one window size.
///
/// Subjects are numbered in manifest order, songs by first appearance and
/// trials consecutively, so the dataset layout only depends on the manifest.
pub fn extract_dataset<E: Executor>(
    manifest: &DatasetManifest,
    features_root: &Path,
    settings: &ExtractSettings,
    exec: &E,
) -> Result<(FeatureDataset, Vec<TrialOutcome>), ExtractError> {
    let dir: PathBuf = features_root.join(settings.dir_name());
    fs::create_dir_all(&dir).map_err(|e| FormatError::io(&dir, e))?;
    let mut songs: HashMap<&str, u32> = HashMap::new();
    let mut jobs = Vec::new();
    for (s, subject) in manifest.subjects.iter().enumerate() {
        for trial in &subject.trials {
            let next = songs.len() as u32;
            let song = *songs.entry(trial.song_id.as_str()).or_insert(next);
            jobs.push(Job {
                subject_id: &subject.subject_id,
                song_id: &trial.song_id,
                trial,
                ids: [s as u32, song, jobs.len() as u32],
            });
        }
    }
    let results = exec.map(jobs.iter().collect(), |job| run_job(job, &dir, settings));
    let mut records = Vec::new();
    let mut outcomes = Vec::new();
    for (job, result) in jobs.iter().zip(results) {
        let trial_id = format!("{}/{}", job.subject_id, job.song_id);
        match result {
            Ok((r, status)) => {
                outcomes.push(TrialOutcome {
                    trial_id,
                    status,
                    windows: r.len(),
                });
                records.extend(r);
            }
            Err(source) => return Err(ExtractError::Trial { trial_id, source }),
        }
    }
    let data = FeatureDataset {
        window_s: settings.window_s,
        subjects: manifest.subjects.iter().map(|s| s.subject_id.clone()).collect(),
        records,
    };
    Ok((data, outcomes))
}
