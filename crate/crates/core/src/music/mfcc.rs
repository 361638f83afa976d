//! Mel-frequency cepstral coefficients and their frame-to-frame deltas.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::frames::FrameSequence;
use super::MusicError;

pub const MEL_BANDS: usize = 40;
pub const MEL_FMIN_HZ: f64 = 20.0;
pub const MFCC_COUNT: usize = 13;
/// Floor applied to band energies before the logarithm.
pub const LOG_FLOOR: f64 = 1e-10;

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * libm::log10(1.0 + hz / 700.0)
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (libm::pow(10.0, mel / 2595.0) - 1.0)
}

/// Triangular filters evenly spaced on the mel scale, each scaled to unit area in Hz.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    /// `(first_bin, weights)` per band.
    filters: Vec<(usize, Vec<f64>)>,
}

impl MelFilterbank {
    pub fn new(bands: usize, bins: usize, sample_rate_hz: f64, fmin: f64, fmax: f64) -> Self {
        let frame_len = 2 * (bins - 1);
        let bin_hz = sample_rate_hz / frame_len as f64;
        let (mlo, mhi) = (hz_to_mel(fmin), hz_to_mel(fmax));
        let edges: Vec<f64> = (0..bands + 2)
            .map(|i| mel_to_hz(mlo + (mhi - mlo) * i as f64 / (bands + 1) as f64))
            .collect();
        let filters = (0..bands)
            .map(|b| {
                let (lo, mid, hi) = (edges[b], edges[b + 1], edges[b + 2]);
                let height = 2.0 / (hi - lo);
                let first = libm::ceil(lo / bin_hz) as usize;
                let last = (libm::floor(hi / bin_hz) as usize).min(bins - 1);
                let weights = (first..=last)
                    .map(|k| {
                        let f = k as f64 * bin_hz;
                        let w = if f <= mid {
                            (f - lo) / (mid - lo)
                        } else {
                            (hi - f) / (hi - mid)
                        };
                        height * w.max(0.0)
                    })
                    .collect();
                (first, weights)
            })
            .collect();
        Self { filters }
    }

    /// Weighted power per band.
    pub fn energies(&self, magnitudes: &[f64]) -> Vec<f64> {
        self.filters
            .iter()
            .map(|(first, w)| {
                w.iter()
                    .zip(&magnitudes[*first..])
                    .map(|(w, m)| w * m * m)
                    .sum()
            })
            .collect()
    }
}

/// Orthonormal DCT-II coefficient `k` of `x`.
pub fn dct2(x: &[f64], k: usize) -> f64 {
    let n = x.len() as f64;
    let scale = if k == 0 {
        libm::sqrt(1.0 / n)
    } else {
        libm::sqrt(2.0 / n)
    };
    scale
        * x.iter()
            .enumerate()
            .map(|(i, v)| v * libm::cos(PI * k as f64 * (i as f64 + 0.5) / n))
            .sum::<f64>()
}

/// Cepstral coefficients 1..=13 of every frame (the 0th is dropped).
pub fn mfcc_frames(frames: &FrameSequence) -> Vec<[f64; MFCC_COUNT]> {
    let bank = MelFilterbank::new(
        MEL_BANDS,
        frames.bins(),
        frames.sample_rate_hz,
        MEL_FMIN_HZ,
        frames.sample_rate_hz / 2.0,
    );
    frames
        .spectra
        .iter()
        .map(|spec| {
            let logs: Vec<f64> = bank
                .energies(spec)
                .into_iter()
                .map(|e| libm::log(e.max(LOG_FLOOR)))
                .collect();
            core::array::from_fn(|i| dct2(&logs, i + 1))
        })
        .collect()
}

/// Frame means of the MFCCs and of their first differences.
pub fn mfcc_mean(frames: &FrameSequence) -> Result<([f64; MFCC_COUNT], [f64; MFCC_COUNT]), MusicError> {
    if frames.len() < 2 {
        return Err(MusicError::TooFewFrames(frames.len()));
    }
    let coeffs = mfcc_frames(frames);
    let mut mean = [0.0; MFCC_COUNT];
    for c in &coeffs {
        for (m, v) in mean.iter_mut().zip(c) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= coeffs.len() as f64);
    let mut delta = [0.0; MFCC_COUNT];
    for pair in coeffs.windows(2) {
        for i in 0..MFCC_COUNT {
            delta[i] += pair[1][i] - pair[0][i];
        }
    }
    delta.iter_mut().for_each(|d| *d /= (coeffs.len() - 1) as f64);
    Ok((mean, delta))
}
