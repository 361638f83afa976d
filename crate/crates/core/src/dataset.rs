//! Signals, annotations and synchronous analysis windows.
//!
//! A [`Trial`] pairs one subject's EEG recording with the audio they listened
//! to and their continuous arousal/valence annotation. All three streams are
//! cut with the same wall-clock windows so that every modality describes the
//! same stretch of time.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Default EEG sampling rate in Hz.
pub const EEG_SAMPLE_RATE_HZ: f64 = 250.0;
/// Default audio sampling rate in Hz.
pub const AUDIO_SAMPLE_RATE_HZ: f64 = 44_100.0;
/// Rate at which the annotation stream is resampled before averaging a window.
pub const LABEL_RESAMPLE_HZ: u64 = 10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("unknown EEG channel `{0}`")]
    UnknownChannel(String),
    #[error("duplicate EEG channel `{0}`")]
    DuplicateChannel(String),
    #[error("expected 12 EEG channels, found {0}")]
    ChannelCountMismatch(usize),
    #[error("EEG channels have unequal lengths")]
    RaggedChannels,
    #[error("sample rate must be positive and finite, got {0}")]
    InvalidSampleRate(f64),
    #[error("audio signal is empty")]
    EmptyAudio,
    #[error("audio sample {index} = {value} lies outside [-1, 1]")]
    AudioOutOfRange { index: usize, value: f64 },
    #[error("annotation timestamps must be strictly increasing (event {0})")]
    NonMonotonicAnnotation(usize),
    #[error("annotation value outside [-1, 1] at event {0}")]
    AnnotationOutOfRange(usize),
    #[error("annotation stream is empty")]
    EmptyStream,
    #[error("window of {window_s} s does not fit in a trial of {duration_s} s")]
    WindowLongerThanTrial { window_s: f64, duration_s: f64 },
    #[error("window length and hop must be positive, got window {window_s} s, hop {hop_s} s")]
    InvalidWindow { window_s: f64, hop_s: f64 },
}

/// The twelve electrodes, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    Fp1,
    Fp2,
    F3,
    F4,
    C3,
    C4,
    F7,
    F8,
    T3,
    T4,
    Fz,
    Pz,
}

impl Channel {
    pub const COUNT: usize = 12;

    pub const ALL: [Channel; 12] = [
        Channel::Fp1,
        Channel::Fp2,
        Channel::F3,
        Channel::F4,
        Channel::C3,
        Channel::C4,
        Channel::F7,
        Channel::F8,
        Channel::T3,
        Channel::T4,
        Channel::Fz,
        Channel::Pz,
    ];

    /// Left/right electrode pairs used for the asymmetry indexes.
    pub const ASYMMETRY_PAIRS: [(Channel, Channel); 5] = [
        (Channel::Fp1, Channel::Fp2),
        (Channel::F3, Channel::F4),
        (Channel::C3, Channel::C4),
        (Channel::F7, Channel::F8),
        (Channel::T3, Channel::T4),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::Fp1 => "Fp1",
            Channel::Fp2 => "Fp2",
            Channel::F3 => "F3",
            Channel::F4 => "F4",
            Channel::C3 => "C3",
            Channel::C4 => "C4",
            Channel::F7 => "F7",
            Channel::F8 => "F8",
            Channel::T3 => "T3",
            Channel::T4 => "T4",
            Channel::Fz => "Fz",
            Channel::Pz => "Pz",
        }
    }

    /// Case-insensitive lookup by electrode name.
    pub fn from_name(name: &str) -> Option<Channel> {
        let name = name.trim();
        Channel::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(name))
    }

    /// Position in the canonical order.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Twelve-channel EEG in microvolts, stored channel-major in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct MultichannelSignal {
    channels: Vec<Vec<f64>>,
    sample_rate_hz: f64,
}

impl MultichannelSignal {
    /// Builds a signal whose channels are already in [`Channel::ALL`] order.
    pub fn new(channels: Vec<Vec<f64>>, sample_rate_hz: f64) -> Result<Self, DatasetError> {
        if channels.len() != Channel::COUNT {
            return Err(DatasetError::ChannelCountMismatch(channels.len()));
        }
        check_rate(sample_rate_hz)?;
        let len = channels[0].len();
        if channels.iter().any(|c| c.len() != len) {
            return Err(DatasetError::RaggedChannels);
        }
        Ok(Self {
            channels,
            sample_rate_hz,
        })
    }

    /// Builds a signal from columns in arbitrary order, reordering them canonically.
    pub fn from_named_columns<S: AsRef<str>>(
        names: &[S],
        columns: Vec<Vec<f64>>,
        sample_rate_hz: f64,
    ) -> Result<Self, DatasetError> {
        if names.len() != Channel::COUNT || columns.len() != Channel::COUNT {
            return Err(DatasetError::ChannelCountMismatch(names.len()));
        }
        let mut slots: Vec<Option<Vec<f64>>> = (0..Channel::COUNT).map(|_| None).collect();
        for (name, column) in names.iter().zip(columns) {
            let name = name.as_ref();
            let channel = Channel::from_name(name)
                .ok_or_else(|| DatasetError::UnknownChannel(name.into()))?;
            let slot = &mut slots[channel.index()];
            if slot.is_some() {
                return Err(DatasetError::DuplicateChannel(name.into()));
            }
            *slot = Some(column);
        }
        // 12 distinct known names fill all 12 slots.
        let channels = slots.into_iter().map(|s| s.unwrap_or_default()).collect();
        Self::new(channels, sample_rate_hz)
    }

    pub fn channel_names(&self) -> [&'static str; 12] {
        Channel::ALL.map(Channel::name)
    }

    pub fn channel(&self, channel: Channel) -> &[f64] {
        &self.channels[channel.index()]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.sample_rate_hz
    }

    /// Copies samples `[start, start + len)` of every channel (clamped to the signal).
    pub fn slice(&self, start: usize, len: usize) -> MultichannelSignal {
        let end = (start + len).min(self.len());
        let start = start.min(end);
        MultichannelSignal {
            channels: self.channels.iter().map(|c| c[start..end].to_vec()).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    /// Applies `f` to every channel, keeping rate and order.
    pub fn map_channels<F: FnMut(&[f64]) -> Vec<f64>>(&self, mut f: F) -> MultichannelSignal {
        MultichannelSignal {
            channels: self.channels.iter().map(|c| f(c)).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }
}

/// Mono audio with samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl AudioSignal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self, DatasetError> {
        check_rate(sample_rate_hz)?;
        if samples.is_empty() {
            return Err(DatasetError::EmptyAudio);
        }
        if let Some((index, &value)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.abs() <= 1.0))
        {
            return Err(DatasetError::AudioOutOfRange { index, value });
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Copies samples `[start, start + len)`, clamped to the signal.
    pub fn slice(&self, start: usize, len: usize) -> AudioSignal {
        let end = (start + len).min(self.samples.len());
        let start = start.min(end);
        AudioSignal {
            samples: self.samples[start..end].to_vec(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }
}

fn check_rate(rate: f64) -> Result<(), DatasetError> {
    if rate.is_finite() && rate > 0.0 {
        Ok(())
    } else {
        Err(DatasetError::InvalidSampleRate(rate))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnotationEvent {
    pub t_ms: u64,
    pub valence: f64,
    pub arousal: f64,
}

/// Timestamped arousal/valence self-report for one song.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnnotationStream {
    events: Vec<AnnotationEvent>,
}

impl AnnotationStream {
    pub fn new(events: Vec<AnnotationEvent>) -> Result<Self, DatasetError> {
        for (i, e) in events.iter().enumerate() {
            if !(e.valence.abs() <= 1.0 && e.arousal.abs() <= 1.0) {
                return Err(DatasetError::AnnotationOutOfRange(i));
            }
            if i > 0 && events[i - 1].t_ms >= e.t_ms {
                return Err(DatasetError::NonMonotonicAnnotation(i));
            }
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[AnnotationEvent] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Zero-order hold at `t_ms`: the latest event at or before `t_ms`, or the
    /// first event when `t_ms` precedes it.
    pub fn hold_at_ms(&self, t_ms: u64) -> Result<(f64, f64), DatasetError> {
        let first = self.events.first().ok_or(DatasetError::EmptyStream)?;
        let after = self.events.partition_point(|e| e.t_ms <= t_ms);
        let e = if after == 0 {
            first
        } else {
            &self.events[after - 1]
        };
        Ok((e.valence, e.arousal))
    }
}

/// `(valence, arousal)` of the stream at `t_s` seconds under zero-order hold.
pub fn resample_annotations(stream: &AnnotationStream, t_s: f64) -> Result<(f64, f64), DatasetError> {
    stream.hold_at_ms(seconds_to_ms(t_s))
}

fn seconds_to_ms(t_s: f64) -> u64 {
    let ms = libm::round(t_s * 1000.0);
    if ms <= 0.0 {
        0
    } else {
        ms as u64
    }
}

/// A wall-clock segment of a trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisWindow {
    pub start_s: f64,
    pub length_s: f64,
}

impl AnalysisWindow {
    /// Sample range `(start, len)` of this window at `rate` Hz.
    pub fn sample_range(&self, rate: f64) -> (usize, usize) {
        let start = libm::round(self.start_s * rate) as usize;
        let len = libm::round(self.length_s * rate) as usize;
        (start, len)
    }
}

/// Cuts `[0, duration_s)` into windows starting at `0, hop, 2 hop, ...`.
///
/// A trailing window that would extend past the end is dropped.
pub fn segment_windows(
    duration_s: f64,
    window_s: f64,
    hop_s: f64,
) -> Result<Vec<AnalysisWindow>, DatasetError> {
    if !(window_s > 0.0 && hop_s > 0.0 && window_s.is_finite() && hop_s.is_finite()) {
        return Err(DatasetError::InvalidWindow { window_s, hop_s });
    }
    if window_s > duration_s + 1e-9 {
        return Err(DatasetError::WindowLongerThanTrial {
            window_s,
            duration_s,
        });
    }
    let count = libm::floor((duration_s - window_s) / hop_s + 1e-9) as usize + 1;
    Ok((0..count)
        .map(|i| AnalysisWindow {
            start_s: i as f64 * hop_s,
            length_s: window_s,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArousalClass {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValenceClass {
    Negative,
    Positive,
}

/// Binarized classes of one window together with the means they came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowLabel {
    pub arousal_class: ArousalClass,
    pub valence_class: ValenceClass,
    pub mean_valence: f64,
    pub mean_arousal: f64,
}

impl WindowLabel {
    /// Classes follow the sign of the means; a mean of exactly 0 counts as high/positive.
    pub fn from_means(mean_valence: f64, mean_arousal: f64) -> Self {
        Self {
            arousal_class: if mean_arousal >= 0.0 {
                ArousalClass::High
            } else {
                ArousalClass::Low
            },
            valence_class: if mean_valence >= 0.0 {
                ValenceClass::Positive
            } else {
                ValenceClass::Negative
            },
            mean_valence,
            mean_arousal,
        }
    }

    pub fn arousal_high(&self) -> bool {
        self.arousal_class == ArousalClass::High
    }

    pub fn valence_positive(&self) -> bool {
        self.valence_class == ValenceClass::Positive
    }
}

/// Mean of the 10 Hz zero-order-hold resampled annotation over the window.
pub fn label_window(
    stream: &AnnotationStream,
    window: &AnalysisWindow,
) -> Result<WindowLabel, DatasetError> {
    if stream.is_empty() {
        return Err(DatasetError::EmptyStream);
    }
    let step_ms = 1000 / LABEL_RESAMPLE_HZ;
    let start_ms = seconds_to_ms(window.start_s);
    let n = (libm::round(window.length_s * LABEL_RESAMPLE_HZ as f64) as u64).max(1);
    let (mut sv, mut sa) = (0.0, 0.0);
    for j in 0..n {
        let (v, a) = stream.hold_at_ms(start_ms + j * step_ms)?;
        sv += v;
        sa += a;
    }
    Ok(WindowLabel::from_means(sv / n as f64, sa / n as f64))
}

/// One subject listening to one song.
#[derive(Debug, Clone)]
pub struct Trial {
    pub subject_id: String,
    pub song_id: String,
    pub eeg: MultichannelSignal,
    pub audio: AudioSignal,
    pub annotations: AnnotationStream,
}

impl Trial {
    /// Length covered by both the EEG and the audio.
    pub fn duration_s(&self) -> f64 {
        self.eeg.duration_s().min(self.audio.duration_s())
    }

    pub fn windows(&self, window_s: f64, hop_s: f64) -> Result<Vec<AnalysisWindow>, DatasetError> {
        segment_windows(self.duration_s(), window_s, hop_s)
    }

    pub fn eeg_window(&self, window: &AnalysisWindow) -> MultichannelSignal {
        let (start, len) = window.sample_range(self.eeg.sample_rate_hz());
        self.eeg.slice(start, len)
    }

    pub fn audio_window(&self, window: &AnalysisWindow) -> AudioSignal {
        let (start, len) = window.sample_range(self.audio.sample_rate_hz());
        self.audio.slice(start, len)
    }

    pub fn label(&self, window: &AnalysisWindow) -> Result<WindowLabel, DatasetError> {
        label_window(&self.annotations, window)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn ev(t_ms: u64, valence: f64, arousal: f64) -> AnnotationEvent {
        AnnotationEvent {
            t_ms,
            valence,
            arousal,
        }
    }

    #[test]
    fn hold_semantics() {
        let s = AnnotationStream::new(vec![ev(0, 0.5, 0.5), ev(2000, -0.5, 0.0)]).unwrap();
        assert_eq!(resample_annotations(&s, 1.0).unwrap(), (0.5, 0.5));
        assert_eq!(resample_annotations(&s, 2.0).unwrap(), (-0.5, 0.0));
        let late = AnnotationStream::new(vec![ev(500, 0.1, 0.2)]).unwrap();
        assert_eq!(resample_annotations(&late, 0.0).unwrap(), (0.1, 0.2));
        assert_eq!(
            resample_annotations(&AnnotationStream::default(), 1.0),
            Err(DatasetError::EmptyStream)
        );
    }

    #[test]
    fn stream_validation() {
        assert_eq!(
            AnnotationStream::new(vec![ev(10, 0.0, 0.0), ev(10, 0.0, 0.0)]),
            Err(DatasetError::NonMonotonicAnnotation(1))
        );
        assert_eq!(
            AnnotationStream::new(vec![ev(0, 1.5, 0.0)]),
            Err(DatasetError::AnnotationOutOfRange(0))
        );
    }

    #[test]
    fn window_counts() {
        assert_eq!(segment_windows(106.0, 10.0, 10.0).unwrap().len(), 10);
        assert_eq!(segment_windows(106.0, 2.0, 2.0).unwrap().len(), 53);
        assert!(matches!(
            segment_windows(5.0, 10.0, 10.0),
            Err(DatasetError::WindowLongerThanTrial { .. })
        ));
        assert!(segment_windows(10.0, 0.0, 1.0).is_err());
        let overlapping = segment_windows(10.0, 4.0, 2.0).unwrap();
        assert_eq!(overlapping.len(), 4);
        assert_eq!(overlapping[3].start_s, 6.0);
    }

    #[test]
    fn constant_annotation_label() {
        let s = AnnotationStream::new(vec![ev(0, 0.3, -0.2)]).unwrap();
        let w = AnalysisWindow {
            start_s: 4.0,
            length_s: 2.0,
        };
        let l = label_window(&s, &w).unwrap();
        assert_eq!(l.valence_class, ValenceClass::Positive);
        assert_eq!(l.arousal_class, ArousalClass::Low);
    }

    #[test]
    fn zero_mean_is_positive() {
        let l = WindowLabel::from_means(0.0, 0.0);
        assert!(l.valence_positive() && l.arousal_high());
    }

    #[test]
    fn midpoint_flip_averages_to_zero() {
        // Hand oracle: 10 Hz samples at 0.0..0.9 s hold 0.5, at 1.0..1.9 s hold -0.5.
        let s = AnnotationStream::new(vec![ev(0, 0.5, 0.5), ev(1000, -0.5, -0.5)]).unwrap();
        let w = AnalysisWindow {
            start_s: 0.0,
            length_s: 2.0,
        };
        let expected: f64 = (0..20).map(|j| if j < 10 { 0.5 } else { -0.5 }).sum::<f64>() / 20.0;
        let l = label_window(&s, &w).unwrap();
        assert_eq!(l.mean_valence, expected);
        assert_eq!(l.mean_valence, 0.0);
        assert_eq!(l.valence_class, ValenceClass::Positive);
        assert_eq!(l.arousal_class, ArousalClass::High);
    }

    #[test]
    fn channel_reordering() {
        let mut names: Vec<&str> = Channel::ALL.iter().map(|c| c.name()).collect();
        names.reverse();
        let cols: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64; 3]).collect();
        let sig = MultichannelSignal::from_named_columns(&names, cols, 250.0).unwrap();
        // Reversed input: Pz (value 0) lands last, Fp1 (value 11) first.
        assert_eq!(sig.channel(Channel::Fp1)[0], 11.0);
        assert_eq!(sig.channel(Channel::Pz)[0], 0.0);
        assert_eq!(sig.channel_names()[0], "Fp1");

        let short: Vec<Vec<f64>> = (0..11).map(|_| vec![0.0]).collect();
        assert_eq!(
            MultichannelSignal::from_named_columns(&names[..11], short, 250.0),
            Err(DatasetError::ChannelCountMismatch(11))
        );
        let mut bad = names.clone();
        bad[0] = "O1";
        let cols: Vec<Vec<f64>> = (0..12).map(|_| vec![0.0]).collect();
        assert_eq!(
            MultichannelSignal::from_named_columns(&bad, cols, 250.0),
            Err(DatasetError::UnknownChannel("O1".into()))
        );
    }

    #[test]
    fn audio_validation() {
        assert_eq!(AudioSignal::new(vec![], 44100.0), Err(DatasetError::EmptyAudio));
        assert!(matches!(
            AudioSignal::new(vec![0.0, 1.2], 44100.0),
            Err(DatasetError::AudioOutOfRange { index: 1, .. })
        ));
        assert!(AudioSignal::new(vec![f64::NAN], 44100.0).is_err());
    }

    proptest! {
        #[test]
        fn windows_tile_without_gaps(duration in 1.0f64..400.0, window in 0.5f64..20.0) {
            prop_assume!(window <= duration);
            let a = segment_windows(duration, window, window).unwrap();
            let b = segment_windows(duration, window, window).unwrap();
            prop_assert_eq!(&a, &b);
            let expected = libm::floor(duration / window + 1e-9) as usize;
            prop_assert_eq!(a.len(), expected);
            for (i, w) in a.iter().enumerate() {
                prop_assert!((w.start_s - i as f64 * window).abs() < 1e-9);
                prop_assert!(w.start_s + w.length_s <= duration + 1e-6);
            }
        }

        #[test]
        fn label_classes_follow_means(
            values in proptest::collection::vec((-1.0f64..=1.0, -1.0f64..=1.0), 1..30),
            start in 0.0f64..5.0,
        ) {
            let events = values.iter().enumerate()
                .map(|(i, &(v, a))| ev(i as u64 * 370, v, a))
                .collect();
            let s = AnnotationStream::new(events).unwrap();
            let l = label_window(&s, &AnalysisWindow { start_s: start, length_s: 3.0 }).unwrap();
            prop_assert_eq!(l.valence_positive(), l.mean_valence >= 0.0);
            prop_assert_eq!(l.arousal_high(), l.mean_arousal >= 0.0);
        }
    }
}
