//! Sensory roughness from pairs of spectral peaks (Plomp-Levelt curve).

use alloc::vec::Vec;

use super::frames::FrameSequence;

/// Peaks below this fraction of the frame's maximum power are ignored.
pub const PEAK_THRESHOLD: f64 = 0.01;

/// Dissonance of two partials at `f1`, `f2` Hz with amplitudes `a1`, `a2`.
pub fn plomp_levelt(f1: f64, f2: f64, a1: f64, a2: f64) -> f64 {
    let s = 0.24 / (0.021 * f1.min(f2) + 19.0);
    let df = (f2 - f1).abs();
    a1 * a2 * (libm::exp(-3.5 * s * df) - libm::exp(-5.75 * s * df))
}

/// Local maxima of the power spectrum at or above [`PEAK_THRESHOLD`] of its maximum,
/// as `(frequency Hz, magnitude)` in increasing frequency.
pub fn spectral_peaks(frames: &FrameSequence, spectrum: &[f64]) -> Vec<(f64, f64)> {
    peak_bins(spectrum)
        .into_iter()
        .map(|k| (frames.bin_hz(k), spectrum[k]))
        .collect()
}

fn peak_bins(spectrum: &[f64]) -> Vec<usize> {
    let max_power = spectrum.iter().map(|m| m * m).fold(0.0, f64::max);
    if max_power <= 0.0 {
        return Vec::new();
    }
    let cut = PEAK_THRESHOLD * max_power;
    (1..spectrum.len().saturating_sub(1))
        .filter(|&k| {
            let m = spectrum[k];
            m > spectrum[k - 1] && m >= spectrum[k + 1] && m * m >= cut
        })
        .collect()
}

/// Summed pairwise dissonance of the peaks of one spectrum.
///
/// Peaks sit on bins, so for a fixed lower peak both exponentials of the
/// curve advance by a constant factor per bin of spacing and are updated by
/// multiplication instead of being re-evaluated.
fn frame_roughness(spectrum: &[f64], bin_hz: f64) -> f64 {
    let bins = peak_bins(spectrum);
    let mut total = 0.0;
    for (i, &k1) in bins.iter().enumerate() {
        let s = 0.24 / (0.021 * k1 as f64 * bin_hz + 19.0);
        let (r1, r2) = (libm::exp(-3.5 * s * bin_hz), libm::exp(-5.75 * s * bin_hz));
        let a1 = spectrum[k1];
        let (mut e1, mut e2, mut prev) = (1.0, 1.0, k1);
        for &k2 in &bins[i + 1..] {
            let gap = k2 - prev;
            e1 *= powi(r1, gap);
            e2 *= powi(r2, gap);
            prev = k2;
            // Both exponentials are now below e^-40.
            if e1 < CUTOFF {
                break;
            }
            total += a1 * spectrum[k2] * (e1 - e2);
        }
    }
    total
}

/// `x^n` by repeated squaring.
fn powi(mut x: f64, mut n: usize) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= x;
        }
        x *= x;
        n >>= 1;
    }
    acc
}

/// `e^-40`.
const CUTOFF: f64 = 4.248354255291589e-18;

/// Mean over frames of the summed pairwise dissonance of spectral peaks.
pub fn roughness_mean(frames: &FrameSequence) -> f64 {
    if frames.is_empty() {
        return 0.0;
    }
    let total: f64 = frames
        .spectra
        .iter()
        .map(|s| frame_roughness(s, frames.bin_hz(1)))
        .sum();
    total / frames.len() as f64
}
