//! Musical content descriptors, averaged over the frames of one window.
//!
//! The 37 values are grouped as dynamics (RMS), rhythm (tempo, attack time,
//! attack slope), timbre (roughness, 13 MFCCs, 13 delta-MFCCs, zero-crossing
//! rate, low-energy rate, spectral flux) and tonality (key clarity, mode,
//! HCDF). Degenerate windows (silence, no onsets, flat chroma) yield neutral
//! values with a flag instead of an error.

mod frames;
mod mfcc;
mod rhythm;
mod roughness;
mod tonal;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use frames::{
    analyze_frames, low_energy_rate, rms_mean, spectral_flux, zero_crossing_rate, FrameSequence,
};
pub use mfcc::{dct2, hz_to_mel, mel_to_hz, mfcc_frames, mfcc_mean, MelFilterbank, MFCC_COUNT};
pub use rhythm::{
    attack_features, onset_frames, onset_strength, tempo_estimate, AttackEstimate, TempoEstimate,
    MAX_BPM, MIN_BPM, NEUTRAL_BPM,
};
pub use roughness::{plomp_levelt, roughness_mean, spectral_peaks};
pub use tonal::{
    chromagram, hcdf_mean, key_clarity_mode, mean_chroma, pitch_class, rotate_profile,
    tonal_centroid, KeyEstimate, MAJOR_PROFILE, MINOR_PROFILE,
};

use crate::dataset::AudioSignal;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MusicError {
    #[error("audio of {samples} samples is shorter than the required {needed}")]
    TooShort { samples: usize, needed: usize },
    #[error("need at least 2 frames for deltas, got {0}")]
    TooFewFrames(usize),
    #[error("frame length must be a power of two and 0 < hop <= frame length")]
    InvalidFrameConfig,
}

/// STFT framing. Defaults: 2048-sample Hann frames with a 1024-sample hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameConfig {
    pub frame_len: usize,
    pub hop: usize,
}

impl Default for FrameConfig {
    fn default() -> Self {
        Self {
            frame_len: 2048,
            hop: 1024,
        }
    }
}

impl FrameConfig {
    pub fn validate(&self) -> Result<(), MusicError> {
        if self.frame_len.is_power_of_two() && self.hop > 0 && self.hop <= self.frame_len {
            Ok(())
        } else {
            Err(MusicError::InvalidFrameConfig)
        }
    }
}

pub const FEATURE_COUNT: usize = 37;

/// Column names of [`MusicFeatureVector::to_vec`], in order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "rms",
    "tempo_bpm",
    "attack_time_s",
    "attack_slope",
    "roughness",
    "mfcc_1",
    "mfcc_2",
    "mfcc_3",
    "mfcc_4",
    "mfcc_5",
    "mfcc_6",
    "mfcc_7",
    "mfcc_8",
    "mfcc_9",
    "mfcc_10",
    "mfcc_11",
    "mfcc_12",
    "mfcc_13",
    "dmfcc_1",
    "dmfcc_2",
    "dmfcc_3",
    "dmfcc_4",
    "dmfcc_5",
    "dmfcc_6",
    "dmfcc_7",
    "dmfcc_8",
    "dmfcc_9",
    "dmfcc_10",
    "dmfcc_11",
    "dmfcc_12",
    "dmfcc_13",
    "zero_cross_rate",
    "low_energy_rate",
    "spectral_flux",
    "key_clarity",
    "mode",
    "hcdf",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MusicFeatureVector {
    pub rms: f64,
    pub tempo_bpm: f64,
    pub attack_time_s: f64,
    pub attack_slope: f64,
    pub roughness: f64,
    pub mfcc: [f64; MFCC_COUNT],
    pub dmfcc: [f64; MFCC_COUNT],
    pub zero_cross_rate: f64,
    pub low_energy_rate: f64,
    pub spectral_flux: f64,
    pub key_clarity: f64,
    pub mode: f64,
    pub hcdf: f64,
}

impl MusicFeatureVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(FEATURE_COUNT);
        v.extend([
            self.rms,
            self.tempo_bpm,
            self.attack_time_s,
            self.attack_slope,
            self.roughness,
        ]);
        v.extend(self.mfcc);
        v.extend(self.dmfcc);
        v.extend([
            self.zero_cross_rate,
            self.low_energy_rate,
            self.spectral_flux,
            self.key_clarity,
            self.mode,
            self.hcdf,
        ]);
        v
    }
}

/// Which descriptors fell back to neutral values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyFlags {
    pub tempo_no_onsets: bool,
    pub attack_no_onsets: bool,
    pub flat_chroma: bool,
}

impl DegeneracyFlags {
    pub fn any(&self) -> bool {
        self.tempo_no_onsets || self.attack_no_onsets || self.flat_chroma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MusicFeatures {
    pub vector: MusicFeatureVector,
    pub flags: DegeneracyFlags,
}

/// Minimum window length accepted by [`extract_music_features`], seconds.
pub const MIN_WINDOW_S: f64 = 2.0;

/// All 37 descriptors of one audio window.
pub fn extract_music_features(
    audio: &AudioSignal,
    cfg: &FrameConfig,
) -> Result<MusicFeatures, MusicError> {
    let needed = libm::floor(MIN_WINDOW_S * audio.sample_rate_hz()) as usize;
    if audio.len() < needed {
        return Err(MusicError::TooShort {
            samples: audio.len(),
            needed,
        });
    }
    let frames = analyze_frames(audio, cfg)?;
    let tempo = tempo_estimate(&frames)?;
    let attack = attack_features(&frames);
    let (mfcc, dmfcc) = mfcc_mean(&frames)?;
    let chroma = chromagram(&frames);
    let key = key_clarity_mode(&mean_chroma(&chroma));
    let vector = MusicFeatureVector {
        rms: rms_mean(&frames),
        tempo_bpm: tempo.bpm,
        attack_time_s: attack.attack_time_s,
        attack_slope: attack.attack_slope,
        roughness: roughness_mean(&frames),
        mfcc,
        dmfcc,
        zero_cross_rate: zero_crossing_rate(audio, cfg)?,
        low_energy_rate: low_energy_rate(&frames),
        spectral_flux: spectral_flux(&frames),
        key_clarity: key.key_clarity,
        mode: key.mode,
        hcdf: hcdf_mean(&chroma),
    };
    Ok(MusicFeatures {
        vector,
        flags: DegeneracyFlags {
            tempo_no_onsets: tempo.no_onsets,
            attack_no_onsets: attack.no_onsets,
            flat_chroma: key.flat_chroma,
        },
    })
}
