//! EEG features: Higuchi fractal dimension of every electrode plus the
//! differential asymmetry of five left/right pairs (17 values per window).

mod filter;
mod higuchi;

use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use filter::{bandpass_filter, BandPass, Biquad};
pub use higuchi::{curve_lengths, higuchi_fd};

use crate::dataset::{Channel, MultichannelSignal};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EegError {
    #[error("signal is constant; curve lengths vanish")]
    DegenerateSignal,
    #[error("signal of {len} samples is too short for k_max = {k_max} (needs at least 2 k_max)")]
    TooShort { len: usize, k_max: usize },
    #[error("k_max must be at least 2, got {0}")]
    InvalidKmax(usize),
    #[error("invalid band {low_hz}..{high_hz} Hz")]
    InvalidBand { low_hz: f64, high_hz: f64 },
    #[error("channel {channel}: {source}")]
    Channel {
        channel: Channel,
        #[source]
        source: Box<EegError>,
    },
}

pub const FEATURE_COUNT: usize = 17;

/// Column names of [`EegFeatureVector::to_vec`], in order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "fd_Fp1",
    "fd_Fp2",
    "fd_F3",
    "fd_F4",
    "fd_C3",
    "fd_C4",
    "fd_F7",
    "fd_F8",
    "fd_T3",
    "fd_T4",
    "fd_Fz",
    "fd_Pz",
    "asym_Fp1_Fp2",
    "asym_F3_F4",
    "asym_C3_C4",
    "asym_F7_F8",
    "asym_T3_T4",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EegFeatureConfig {
    /// Largest Higuchi delay.
    pub k_max: usize,
    /// Band applied to whole recordings before windowing; `None` disables filtering.
    pub bandpass: Option<(f64, f64)>,
}

impl EegFeatureConfig {
    pub const DEFAULT_K_MAX: usize = 32;
    pub const DEFAULT_BAND: (f64, f64) = (0.5, 60.0);
}

impl Default for EegFeatureConfig {
    fn default() -> Self {
        Self {
            k_max: Self::DEFAULT_K_MAX,
            bandpass: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EegFeatureVector {
    /// Fractal dimension per electrode in canonical order.
    pub fd: [f64; 12],
    /// `fd[left] - fd[right]` for [`Channel::ASYMMETRY_PAIRS`].
    pub asymmetry: [f64; 5],
}

impl EegFeatureVector {
    pub fn from_fd(fd: [f64; 12]) -> Self {
        let asymmetry =
            Channel::ASYMMETRY_PAIRS.map(|(l, r)| fd[l.index()] - fd[r.index()]);
        Self { fd, asymmetry }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.fd.iter().chain(&self.asymmetry).copied().collect()
    }
}

/// Filters a whole recording when the configuration asks for it.
pub fn prepare_recording(
    signal: &MultichannelSignal,
    cfg: &EegFeatureConfig,
) -> Result<MultichannelSignal, EegError> {
    match cfg.bandpass {
        Some((lo, hi)) => bandpass_filter(signal, lo, hi),
        None => Ok(signal.clone()),
    }
}

/// 17-dimensional feature vector of one EEG window.
pub fn extract_eeg_features(
    window: &MultichannelSignal,
    cfg: &EegFeatureConfig,
) -> Result<EegFeatureVector, EegError> {
    let mut fd = [0.0; 12];
    for channel in Channel::ALL {
        fd[channel.index()] =
            higuchi_fd(window.channel(channel), cfg.k_max).map_err(|e| EegError::Channel {
                channel,
                source: Box::new(e),
            })?;
    }
    Ok(EegFeatureVector::from_fd(fd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;
    use rand::{rngs::StdRng, SeedableRng};
    use rand_distr::{Distribution, StandardNormal};

    fn noise(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn signal(channels: Vec<Vec<f64>>) -> MultichannelSignal {
        MultichannelSignal::new(channels, 250.0).unwrap()
    }

    #[test]
    fn identical_channels_have_no_asymmetry() {
        let x = noise(1, 500);
        let v = extract_eeg_features(&signal(vec![x; 12]), &EegFeatureConfig::default()).unwrap();
        assert!(v.asymmetry.iter().all(|&a| a == 0.0));
        assert_eq!(v.to_vec().len(), FEATURE_COUNT);
    }

    #[test]
    fn asymmetry_arithmetic() {
        let mut fd = [1.0; 12];
        fd[Channel::Fp1.index()] = 1.5;
        fd[Channel::Fp2.index()] = 1.3;
        let v = EegFeatureVector::from_fd(fd);
        assert!((v.asymmetry[0] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn two_second_window_is_valid() {
        let chans: Vec<Vec<f64>> = (0..12).map(|c| noise(c, 500)).collect();
        let v = extract_eeg_features(&signal(chans), &EegFeatureConfig::default()).unwrap();
        assert!(v.fd.iter().all(|&f| f > 0.0 && f.is_finite()));
    }

    #[test]
    fn flat_channel_error_names_channel() {
        let mut chans: Vec<Vec<f64>> = (0..12).map(|c| noise(c, 500)).collect();
        chans[Channel::C4.index()] = vec![0.0; 500];
        let err = extract_eeg_features(&signal(chans), &EegFeatureConfig::default()).unwrap_err();
        assert!(matches!(err, EegError::Channel { channel: Channel::C4, .. }));
    }

    #[test]
    fn swapping_pairs_negates_asymmetry() {
        let chans: Vec<Vec<f64>> = (0..12).map(|c| noise(100 + c, 400)).collect();
        let mut swapped = chans.clone();
        for (l, r) in Channel::ASYMMETRY_PAIRS {
            swapped.swap(l.index(), r.index());
        }
        let cfg = EegFeatureConfig::default();
        let a = extract_eeg_features(&signal(chans), &cfg).unwrap();
        let b = extract_eeg_features(&signal(swapped), &cfg).unwrap();
        for (x, y) in a.asymmetry.iter().zip(&b.asymmetry) {
            assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn roughness_ordering() {
        let white = noise(5, 1000);
        let walk: Vec<f64> = white
            .iter()
            .scan(0.0, |s, v| {
                *s += v;
                Some(*s)
            })
            .collect();
        let sine: Vec<f64> = (0..1000)
            .map(|i| libm::sin(2.0 * PI * 3.0 * i as f64 / 250.0))
            .collect();
        let fw = higuchi_fd(&white, 32).unwrap();
        let fr = higuchi_fd(&walk, 32).unwrap();
        let fs = higuchi_fd(&sine, 32).unwrap();
        assert!(fw > fr && fr > fs, "{fw} {fr} {fs}");
    }

    fn rms(x: &[f64]) -> f64 {
        libm::sqrt(x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64)
    }

    /// |H(e^{jw})| of a biquad evaluated directly from its coefficients.
    fn biquad_gain(q: &Biquad, freq: f64, rate: f64) -> f64 {
        let w = 2.0 * PI * freq / rate;
        let (c1, s1, c2, s2) = (libm::cos(w), libm::sin(w), libm::cos(2.0 * w), libm::sin(2.0 * w));
        let nr = q.b[0] + q.b[1] * c1 + q.b[2] * c2;
        let ni = -(q.b[1] * s1 + q.b[2] * s2);
        let dr = 1.0 + q.a[0] * c1 + q.a[1] * c2;
        let di = -(q.a[0] * s1 + q.a[1] * s2);
        libm::sqrt((nr * nr + ni * ni) / (dr * dr + di * di))
    }

    fn sine_through_filter(freq: f64) -> (f64, f64) {
        let rate = 250.0;
        let x: Vec<f64> = (0..2500)
            .map(|i| libm::sin(2.0 * PI * freq * i as f64 / rate))
            .collect();
        let chans = vec![x.clone(); 12];
        let y = bandpass_filter(&signal(chans), 0.5, 60.0).unwrap();
        let out = y.channel(Channel::Fz);
        assert_eq!(out.len(), x.len());
        let bp = BandPass::new(0.5, 60.0, rate).unwrap();
        // Forward-backward filtering squares the magnitude response.
        let analytic: f64 = bp
            .sections
            .iter()
            .map(|s| biquad_gain(s, freq, rate))
            .product::<f64>()
            .powi(2);
        // Middle half only: the 0.5 Hz section rings for well over a second.
        let measured = rms(&out[625..1875]) / rms(&x[625..1875]);
        (measured, analytic)
    }

    #[test]
    fn bandpass_rejects_100hz() {
        let (measured, analytic) = sine_through_filter(100.0);
        assert!(analytic < 0.1);
        assert!((measured - analytic).abs() < 0.01, "{measured} vs {analytic}");
        assert!(measured < 0.1);
    }

    #[test]
    fn bandpass_passes_10hz() {
        let (measured, analytic) = sine_through_filter(10.0);
        assert!((analytic - 1.0).abs() < 0.1);
        assert!((measured - analytic).abs() < 0.01, "{measured} vs {analytic}");
        assert!((measured - 1.0).abs() < 0.1);
    }
}
