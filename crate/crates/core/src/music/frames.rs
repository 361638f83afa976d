//! STFT front-end and the frame-level descriptors that need nothing else.

use alloc::vec::Vec;

use super::{FrameConfig, MusicError};
use crate::dataset::AudioSignal;
use crate::dsp::{hann, Fft};

/// Magnitude spectra and raw-sample RMS of consecutive frames.
///
/// Magnitudes are divided by half the window sum, so a full-scale sinusoid
/// centred on a bin reads as roughly 1.0 regardless of frame length.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    pub spectra: Vec<Vec<f64>>,
    pub rms: Vec<f64>,
    pub times_s: Vec<f64>,
    pub frame_len: usize,
    pub hop: usize,
    pub sample_rate_hz: f64,
}

impl FrameSequence {
    pub fn len(&self) -> usize {
        self.rms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rms.is_empty()
    }

    pub fn bins(&self) -> usize {
        self.frame_len / 2 + 1
    }

    /// Centre frequency of bin `k` in Hz.
    pub fn bin_hz(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate_hz / self.frame_len as f64
    }

    /// Frames per second.
    pub fn frame_rate(&self) -> f64 {
        self.sample_rate_hz / self.hop as f64
    }
}

pub(crate) fn frame_count(len: usize, cfg: &FrameConfig) -> Result<usize, MusicError> {
    if len < cfg.frame_len {
        return Err(MusicError::TooShort {
            samples: len,
            needed: cfg.frame_len,
        });
    }
    Ok(1 + (len - cfg.frame_len) / cfg.hop)
}

/// Hann-windowed magnitude STFT with per-frame RMS over the unwindowed samples.
pub fn analyze_frames(audio: &AudioSignal, cfg: &FrameConfig) -> Result<FrameSequence, MusicError> {
    cfg.validate()?;
    let x = audio.samples();
    let count = frame_count(x.len(), cfg)?;
    let fft = Fft::new(cfg.frame_len).ok_or(MusicError::InvalidFrameConfig)?;
    let window = hann(cfg.frame_len);
    let scale = 2.0 / window.iter().sum::<f64>();
    let mut scratch = Vec::with_capacity(cfg.frame_len);
    let mut spectra = Vec::with_capacity(count);
    let mut rms = Vec::with_capacity(count);
    let mut times_s = Vec::with_capacity(count);
    for f in 0..count {
        let start = f * cfg.hop;
        let frame = &x[start..start + cfg.frame_len];
        let mut mag = fft.magnitude_spectrum(frame, &window, &mut scratch);
        for m in mag.iter_mut() {
            *m *= scale;
        }
        spectra.push(mag);
        rms.push(libm::sqrt(
            frame.iter().map(|v| v * v).sum::<f64>() / cfg.frame_len as f64,
        ));
        times_s.push(start as f64 / audio.sample_rate_hz());
    }
    Ok(FrameSequence {
        spectra,
        rms,
        times_s,
        frame_len: cfg.frame_len,
        hop: cfg.hop,
        sample_rate_hz: audio.sample_rate_hz(),
    })
}

/// Mean of the per-frame RMS values.
pub fn rms_mean(frames: &FrameSequence) -> f64 {
    crate::stats::mean(&frames.rms)
}

/// Mean over frames of (strict sign changes between neighbouring samples) / frame length.
pub fn zero_crossing_rate(audio: &AudioSignal, cfg: &FrameConfig) -> Result<f64, MusicError> {
    cfg.validate()?;
    let x = audio.samples();
    let count = frame_count(x.len(), cfg)?;
    let mut total = 0.0;
    for f in 0..count {
        let frame = &x[f * cfg.hop..f * cfg.hop + cfg.frame_len];
        let crossings = frame.windows(2).filter(|p| p[0] * p[1] < 0.0).count();
        total += crossings as f64 / cfg.frame_len as f64;
    }
    Ok(total / count as f64)
}

/// Fraction of frames whose RMS lies strictly below the mean frame RMS.
///
/// "Strictly below" allows one part in 10^12 of slack so that frames of equal
/// energy never count through rounding in the mean.
pub fn low_energy_rate(frames: &FrameSequence) -> f64 {
    if frames.is_empty() {
        return 0.0;
    }
    let mean = rms_mean(frames);
    let cut = mean - 1e-12 * mean.abs();
    frames.rms.iter().filter(|&&r| r < cut).count() as f64 / frames.len() as f64
}

/// Mean Euclidean distance between consecutive magnitude spectra (0 for one frame).
pub fn spectral_flux(frames: &FrameSequence) -> f64 {
    if frames.len() < 2 {
        return 0.0;
    }
    let total: f64 = frames
        .spectra
        .windows(2)
        .map(|p| {
            libm::sqrt(
                p[0].iter()
                    .zip(&p[1])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>(),
            )
        })
        .sum();
    total / (frames.len() - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    const SR: f64 = 44_100.0;

    fn sine(freq: f64, amp: f64, seconds: f64) -> AudioSignal {
        let n = (seconds * SR) as usize;
        let x = (0..n)
            .map(|i| amp * libm::sin(2.0 * PI * freq * i as f64 / SR + 0.3))
            .collect();
        AudioSignal::new(x, SR).unwrap()
    }

    fn frames_with_rms(rms: Vec<f64>) -> FrameSequence {
        FrameSequence {
            spectra: vec![vec![0.0; 3]; rms.len()],
            times_s: vec![0.0; rms.len()],
            rms,
            frame_len: 4,
            hop: 2,
            sample_rate_hz: SR,
        }
    }

    #[test]
    fn silence_is_all_zero() {
        let audio = AudioSignal::new(vec![0.0; 2 * SR as usize], SR).unwrap();
        let f = analyze_frames(&audio, &FrameConfig::default()).unwrap();
        assert!(f.spectra.iter().flatten().all(|&m| m == 0.0));
        assert!(f.rms.iter().all(|&r| r == 0.0));
        assert_eq!(f.bins(), 1025);
    }

    #[test]
    fn sine_peaks_at_expected_bin() {
        let f = analyze_frames(&sine(1000.0, 1.0, 1.0), &FrameConfig::default()).unwrap();
        let expected = libm::round(1000.0 * 2048.0 / SR) as usize;
        assert_eq!(expected, 46);
        for spec in &f.spectra {
            let peak = spec
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert_eq!(peak, expected);
        }
    }

    #[test]
    fn too_short_input() {
        let audio = AudioSignal::new(vec![0.1; 1024], SR).unwrap();
        assert!(matches!(
            analyze_frames(&audio, &FrameConfig::default()),
            Err(MusicError::TooShort { .. })
        ));
    }

    #[test]
    fn rms_of_sines_and_constants() {
        let cfg = FrameConfig::default();
        let f = analyze_frames(&sine(1000.0, 0.5, 1.0), &cfg).unwrap();
        assert!((rms_mean(&f) - 0.5 / libm::sqrt(2.0)).abs() < 1e-3);
        let ones = AudioSignal::new(vec![1.0; 8192], SR).unwrap();
        assert_eq!(rms_mean(&analyze_frames(&ones, &cfg).unwrap()), 1.0);
    }

    #[test]
    fn zcr_cases() {
        let cfg = FrameConfig::default();
        let z = zero_crossing_rate(&sine(441.0, 0.8, 1.0), &cfg).unwrap();
        assert!((z - 0.02).abs() <= 0.02 * 0.05, "{z}");
        let flat = AudioSignal::new(vec![0.5; 4096], SR).unwrap();
        assert_eq!(zero_crossing_rate(&flat, &cfg).unwrap(), 0.0);
        let alt = AudioSignal::new((0..4096).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(), SR)
            .unwrap();
        assert!((zero_crossing_rate(&alt, &cfg).unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn low_energy_cases() {
        assert_eq!(low_energy_rate(&frames_with_rms(vec![0.1; 7])), 0.0);
        assert_eq!(low_energy_rate(&frames_with_rms(vec![1.0, 0.0, 1.0, 0.0])), 0.5);
        let mut one_loud = vec![0.0; 10];
        one_loud[3] = 1.0;
        assert!((low_energy_rate(&frames_with_rms(one_loud)) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn flux_cases() {
        let cfg = FrameConfig::default();
        let f = analyze_frames(&sine(1000.0, 1.0, 1.0), &cfg).unwrap();
        let peak = f.spectra[0].iter().cloned().fold(0.0, f64::max);
        assert!(spectral_flux(&f) < 1e-3 * peak);

        // Silence followed by a tone: the pair straddling the boundary dominates.
        let mut x = vec![0.0; 4 * 2048];
        x.extend(sine(1000.0, 1.0, 0.5).samples());
        let f = analyze_frames(&AudioSignal::new(x, SR).unwrap(), &cfg).unwrap();
        let dists: Vec<f64> = f
            .spectra
            .windows(2)
            .map(|p| libm::sqrt(p[0].iter().zip(&p[1]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()))
            .collect();
        let boundary = dists.iter().cloned().fold(0.0, f64::max);
        let interior = *dists.last().unwrap();
        assert!(boundary > interior);

        let one = frames_with_rms(vec![1.0]);
        assert_eq!(spectral_flux(&one), 0.0);
    }
}
