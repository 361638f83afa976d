//! Decision-level fusion of per-modality class probabilities, the fused
//! decision rule, and feature-level concatenation.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::seed;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FusionError {
    #[error("probabilities belong to different windows ({eeg} vs {music})")]
    MismatchedWindows { eeg: u64, music: u64 },
    #[error("{modality} block has {found} features, expected {expected}")]
    DimensionMismatch {
        modality: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("fusion weight {0} outside [0, 1]")]
    InvalidAlpha(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modality {
    Eeg,
    Music,
    Multimodal,
}

/// Probability of class 1 for one window; class 2 has the complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassProbabilities {
    pub p_class1: f64,
    pub modality: Modality,
    /// Identifier of the analysis window the probability refers to.
    pub window: u64,
}

impl ClassProbabilities {
    pub fn new(p_class1: f64, modality: Modality, window: u64) -> Result<Self, FusionError> {
        if !(0.0..=1.0).contains(&p_class1) {
            return Err(FusionError::InvalidProbability(p_class1));
        }
        Ok(Self {
            p_class1,
            modality,
            window,
        })
    }

    pub fn p_class2(&self) -> f64 {
        1.0 - self.p_class1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    /// Weight of the EEG probability.
    pub alpha: f64,
    pub seed: u64,
}

impl FusionConfig {
    pub fn new(alpha: f64, seed: u64) -> Result<Self, FusionError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FusionError::InvalidAlpha(alpha));
        }
        Ok(Self { alpha, seed })
    }
}

/// Class 1 or class 2 of a binary target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    One,
    Two,
}

impl Class {
    pub fn is_one(self) -> bool {
        self == Class::One
    }
}

/// Weighted probability `alpha p_eeg + (1 - alpha) p_music`.
///
/// The endpoints return the corresponding input exactly.
pub fn fuse_probability(p_eeg: f64, p_music: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        p_eeg
    } else if alpha == 0.0 {
        p_music
    } else {
        (alpha * p_eeg + (1.0 - alpha) * p_music).clamp(p_eeg.min(p_music), p_eeg.max(p_music))
    }
}

pub fn fuse_decision(
    p_eeg: &ClassProbabilities,
    p_music: &ClassProbabilities,
    cfg: &FusionConfig,
) -> Result<ClassProbabilities, FusionError> {
    if p_eeg.window != p_music.window {
        return Err(FusionError::MismatchedWindows {
            eeg: p_eeg.window,
            music: p_music.window,
        });
    }
    if !(0.0..=1.0).contains(&cfg.alpha) {
        return Err(FusionError::InvalidAlpha(cfg.alpha));
    }
    Ok(ClassProbabilities {
        p_class1: fuse_probability(p_eeg.p_class1, p_music.p_class1, cfg.alpha),
        modality: Modality::Multimodal,
        window: p_eeg.window,
    })
}

/// Class 1 above one half, class 2 below, a fair seeded coin at exactly one half.
pub fn decide_p(p_class1: f64, seed: u64) -> Class {
    if p_class1 > 0.5 {
        Class::One
    } else if p_class1 < 0.5 {
        Class::Two
    } else if seed::unit_f64(&mut seed::rng(seed)) < 0.5 {
        Class::One
    } else {
        Class::Two
    }
}

pub fn decide(p: &ClassProbabilities, seed: u64) -> Class {
    decide_p(p.p_class1, seed)
}

/// EEG block (17 values) followed by the music block (37 values).
pub fn fuse_features(v_eeg: &[f64], v_music: &[f64]) -> Result<Vec<f64>, FusionError> {
    if v_eeg.len() != crate::eeg::FEATURE_COUNT {
        return Err(FusionError::DimensionMismatch {
            modality: "EEG",
            expected: crate::eeg::FEATURE_COUNT,
            found: v_eeg.len(),
        });
    }
    if v_music.len() != crate::music::FEATURE_COUNT {
        return Err(FusionError::DimensionMismatch {
            modality: "music",
            expected: crate::music::FEATURE_COUNT,
            found: v_music.len(),
        });
    }
    Ok(v_eeg.iter().chain(v_music).copied().collect())
}

pub const FUSED_FEATURE_COUNT: usize = crate::eeg::FEATURE_COUNT + crate::music::FEATURE_COUNT;
