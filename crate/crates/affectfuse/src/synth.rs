//! Seeded demo dataset whose classes are a known function of the signals.
//!
//! Every song gets an (arousal, valence) class from a balanced schedule.
//! Arousal sets the tempo and loudness of the audio and how strongly the EEG
//! of every electrode is autocorrelated (less correlation, higher fractal
//! dimension). Valence sets the chord quality (major or minor) and which
//! hemisphere's electrodes carry the extra correlation. Each subject's
//! annotation stays on the side of zero given by the song's class.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use affectfuse_core::dataset::{
    AnnotationEvent, AnnotationStream, Channel, MultichannelSignal, AUDIO_SAMPLE_RATE_HZ,
    EEG_SAMPLE_RATE_HZ,
};
use affectfuse_core::seed;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::formats::{
    load_manifest, write_annotations, write_eeg, write_wav, DatasetManifest, FormatError,
    SubjectRecord, TrialRef,
};

const SONG_STREAM: u64 = 0x504E;
const EEG_STREAM: u64 = 0xEE6;
const ANNOTATION_STREAM: u64 = 0xA770;
const META_STREAM: u64 = 0x3E7A;

/// Autocorrelation of the EEG processes at high and low arousal.
const PHI_HIGH_AROUSAL: f64 = 0.2;
const PHI_LOW_AROUSAL: f64 = 0.8;
/// Extra autocorrelation on one hemisphere; left for negative valence.
const PHI_ASYMMETRY: f64 = 0.15;
const EEG_SCALE_UV: f64 = 20.0;
const ANNOTATION_STEP_MS: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub subjects: usize,
    /// Songs per subject; every subject hears the same songs.
    pub trials: usize,
    pub duration_s: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            subjects: 2,
            trials: 4,
            duration_s: 30.0,
        }
    }
}

/// Ground truth of one generated song.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SongDesign {
    pub song_id: String,
    pub arousal_high: bool,
    pub valence_positive: bool,
    pub tempo_bpm: f64,
    pub amplitude: f64,
    pub root_pitch_class: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub manifest_path: PathBuf,
    /// As loaded back from disk, with paths resolved against `out_dir`.
    pub manifest: DatasetManifest,
    pub songs: Vec<SongDesign>,
}

/// Classes per song: each block of four songs holds every (arousal, valence)
/// combination once, in seeded order.
pub fn class_schedule(seed_value: u64, songs: usize) -> Vec<(bool, bool)> {
    let mut out = Vec::with_capacity(songs);
    let mut block = 0u64;
    while out.len() < songs {
        let mut combos = [(true, true), (true, false), (false, true), (false, false)];
        seed::shuffle(&mut combos, &mut seed::rng(seed::derive(seed_value, &[SONG_STREAM, u64::MAX, block])));
        out.extend(combos.iter().take(songs - out.len()));
        block += 1;
    }
    out
}

pub fn design_songs(cfg: &SynthConfig) -> Vec<SongDesign> {
    class_schedule(cfg.seed, cfg.trials)
        .into_iter()
        .enumerate()
        .map(|(j, (arousal_high, valence_positive))| {
            let mut rng = seed::rng(seed::derive(cfg.seed, &[SONG_STREAM, j as u64]));
            let tempo = if arousal_high { 138.0 } else { 84.0 };
            let loud = if arousal_high { 0.45 } else { 0.15 };
            SongDesign {
                song_id: format!("song{:02}", j + 1),
                arousal_high,
                valence_positive,
                tempo_bpm: tempo + rng.random_range(-4.0..4.0),
                amplitude: loud * rng.random_range(0.9..1.1),
                root_pitch_class: rng.random_range(0..12),
            }
        })
        .collect()
}

fn midi_hz(note: f64) -> f64 {
    440.0 * 2f64.powf((note - 69.0) / 12.0)
}

/// Chord pad moving I-IV-V-I every 2 s plus a decaying click on every beat.
pub fn song_audio(song: &SongDesign, duration_s: f64) -> Vec<f64> {
    let sr = AUDIO_SAMPLE_RATE_HZ;
    let n = (duration_s * sr).round() as usize;
    let third = if song.valence_positive { 4.0 } else { 3.0 };
    let root = 57.0 + f64::from(song.root_pitch_class);
    let beat = 60.0 / song.tempo_bpm;
    let chord_s = 2.0;
    let ramp_s = 0.02;
    let pad = 0.18 * song.amplitude;
    let click = 0.6 * song.amplitude;
    (0..n)
        .map(|i| {
            let t = i as f64 / sr;
            let seg = (t / chord_s).floor();
            let step = [0.0, 5.0, 7.0, 0.0][seg as usize % 4];
            let local = t - seg * chord_s;
            let env = (local / ramp_s).min((chord_s - local) / ramp_s).min(1.0);
            let base = root + step;
            let tones: f64 = [base, base + third, base + 7.0, base + 12.0]
                .iter()
                .map(|&m| (2.0 * PI * midi_hz(m) * t).sin())
                .sum();
            let since = t - (t / beat).floor() * beat;
            let tick = if since < 0.05 {
                (-since / 0.01).exp() * (2.0 * PI * 1800.0 * since).sin()
            } else {
                0.0
            };
            pad * env * tones + click * tick
        })
        .collect()
}

/// Twelve AR(1) channels whose coefficient encodes the song's classes.
pub fn subject_eeg(song: &SongDesign, duration_s: f64, seed_value: u64) -> MultichannelSignal {
    let n = (duration_s * EEG_SAMPLE_RATE_HZ).round() as usize;
    let mut rng = seed::rng(seed_value);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let base = if song.arousal_high {
        PHI_HIGH_AROUSAL
    } else {
        PHI_LOW_AROUSAL
    };
    let left = [Channel::Fp1, Channel::F3, Channel::C3, Channel::F7, Channel::T3];
    let right = [Channel::Fp2, Channel::F4, Channel::C4, Channel::F8, Channel::T4];
    let channels = Channel::ALL
        .iter()
        .map(|c| {
            let shifted = if song.valence_positive {
                right.contains(c)
            } else {
                left.contains(c)
            };
            let phi = base + if shifted { PHI_ASYMMETRY } else { 0.0 } + rng.random_range(-0.02..0.02);
            let gain = (1.0 - phi * phi).sqrt();
            let mut x = normal.sample(&mut rng);
            (0..n)
                .map(|_| {
                    x = phi * x + gain * normal.sample(&mut rng);
                    EEG_SCALE_UV * x
                })
                .collect()
        })
        .collect();
    MultichannelSignal::new(channels, EEG_SAMPLE_RATE_HZ).expect("12 equal channels")
}

/// Slowly drifting trace that never crosses zero on either axis.
pub fn annotation_trace(song: &SongDesign, duration_s: f64, seed_value: u64) -> AnnotationStream {
    let mut rng = seed::rng(seed_value);
    let drift = Normal::new(0.0, 0.03).expect("positive std");
    let sign = |b: bool| if b { 1.0 } else { -1.0 };
    let (sv, sa) = (sign(song.valence_positive), sign(song.arousal_high));
    let mut v: f64 = rng.random_range(0.3..0.7);
    let mut a: f64 = rng.random_range(0.3..0.7);
    let end_ms = (duration_s * 1000.0) as u64;
    let events = (0..end_ms)
        .step_by(ANNOTATION_STEP_MS as usize)
        .map(|t_ms| {
            v = (v + drift.sample(&mut rng)).clamp(0.05, 0.95);
            a = (a + drift.sample(&mut rng)).clamp(0.05, 0.95);
            AnnotationEvent {
                t_ms,
                valence: sv * (v * 1000.0).round() / 1000.0,
                arousal: sa * (a * 1000.0).round() / 1000.0,
            }
        })
        .collect();
    AnnotationStream::new(events).expect("monotone, in range")
}

fn create_dir(path: &Path) -> Result<(), FormatError> {
    fs::create_dir_all(path).map_err(|e| FormatError::io(path, e))
}

/// Writes `manifest.toml`, `design.json`, `audio/`, `eeg/` and `annotations/` under `out_dir`.
pub fn synthesize(cfg: &SynthConfig, out_dir: &Path) -> Result<SynthOutput, FormatError> {
    for sub in ["audio", "eeg", "annotations"] {
        create_dir(&out_dir.join(sub))?;
    }
    let songs = design_songs(cfg);
    for song in &songs {
        let rel = format!("audio/{}.wav", song.song_id);
        write_wav(&out_dir.join(rel), &song_audio(song, cfg.duration_s), AUDIO_SAMPLE_RATE_HZ as u32)?;
    }
    let mut manifest = DatasetManifest::default();
    for s in 0..cfg.subjects {
        let subject_id = format!("S{:02}", s + 1);
        let mut meta = seed::rng(seed::derive(cfg.seed, &[META_STREAM, s as u64]));
        let mut trials = Vec::new();
        for (j, song) in songs.iter().enumerate() {
            let coords = [s as u64, j as u64];
            let stem = format!("{subject_id}_{}", song.song_id);
            let eeg_rel = PathBuf::from(format!("eeg/{stem}.csv"));
            let ann_rel = PathBuf::from(format!("annotations/{stem}.csv"));
            let eeg_seed = seed::derive(cfg.seed, &[EEG_STREAM, coords[0], coords[1]]);
            write_eeg(&out_dir.join(&eeg_rel), &subject_eeg(song, cfg.duration_s, eeg_seed))?;
            let ann_seed = seed::derive(cfg.seed, &[ANNOTATION_STREAM, coords[0], coords[1]]);
            write_annotations(&out_dir.join(&ann_rel), &annotation_trace(song, cfg.duration_s, ann_seed))?;
            trials.push(TrialRef {
                song_id: song.song_id.clone(),
                eeg: eeg_rel,
                audio: PathBuf::from(format!("audio/{}.wav", song.song_id)),
                annotation: ann_rel,
                familiarity: meta.random_range(0..2),
                confidence: meta.random_range(1..=3),
            });
        }
        manifest.subjects.push(SubjectRecord { subject_id, trials });
    }
    let manifest_path = out_dir.join("manifest.toml");
    fs::write(&manifest_path, manifest.to_toml()).map_err(|e| FormatError::io(&manifest_path, e))?;
    let design = out_dir.join("design.json");
    let json = serde_json::to_string_pretty(&songs).expect("plain data");
    fs::write(&design, json + "\n").map_err(|e| FormatError::io(&design, e))?;
    Ok(SynthOutput {
        manifest: load_manifest(&manifest_path)?,
        manifest_path,
        songs,
    })
}
