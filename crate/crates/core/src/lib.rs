//! Continuous music-emotion recognition from EEG and musical content.
//!
//! The crate is `no_std` (with `alloc`) and contains every numeric stage of the
//! pipeline:
//!
//! * [`dataset`]: signals, annotation streams, synchronous windowing and labels
//! * [`eeg`]: Higuchi fractal dimension, left/right asymmetry, zero-phase band-pass
//! * [`music`]: 37 frame-averaged descriptors (dynamics, rhythm, timbre, tonality)
//! * [`svm`]: Gaussian-kernel SVM trained by SMO plus sigmoid probability calibration
//! * [`fusion`]: weighted decision-level fusion and feature concatenation
//! * [`eval`]: normalization, fold generation, metrics, protocols and sweeps
//!
//! File formats, the synthetic dataset generator and the command-line front end
//! live in the `affectfuse` crate.
#![no_std]
#![cfg_attr(docsrs, feature(doc_cfg))]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod dataset;
pub mod dsp;
pub mod eeg;
pub mod eval;
pub mod fusion;
pub mod music;
pub mod seed;
pub mod svm;

mod stats;

pub use dataset::{
    AnalysisWindow, AnnotationEvent, AnnotationStream, AudioSignal, Channel, MultichannelSignal,
    Trial, WindowLabel,
};
pub use eeg::{EegFeatureConfig, EegFeatureVector};
pub use fusion::{ClassProbabilities, FusionConfig, Modality};
pub use music::{FrameConfig, MusicFeatureVector};
pub use svm::{ProbabilityCalibration, SvmModel, SvmParams, TrainingSet};
