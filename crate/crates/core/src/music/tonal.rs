//! Chroma, key clarity, mode and the harmonic change detection function.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::frames::FrameSequence;
use crate::stats;

pub const CHROMA_FMIN_HZ: f64 = 55.0;
pub const CHROMA_FMAX_HZ: f64 = 2000.0;

/// Krumhansl-Kessler probe-tone ratings, tonic first (C major / C minor).
pub const MAJOR_PROFILE: [f64; 12] = [
    6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88,
];
pub const MINOR_PROFILE: [f64; 12] = [
    6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17,
];

/// Tonal-centroid radii for the circles of fifths, minor thirds and major thirds.
pub const CENTROID_RADII: [f64; 3] = [1.0, 1.0, 0.5];

/// Pitch class (C = 0, ..., A = 9, B = 11) of a frequency.
pub fn pitch_class(freq_hz: f64) -> usize {
    let semis = libm::round(12.0 * libm::log2(freq_hz / 440.0)) as i64 + 9;
    semis.rem_euclid(12) as usize
}

/// Energy per pitch class for each frame, normalized to unit sum when non-zero.
pub fn chromagram(frames: &FrameSequence) -> Vec<[f64; 12]> {
    let bins: Vec<(usize, usize)> = (1..frames.bins())
        .filter_map(|k| {
            let f = frames.bin_hz(k);
            (CHROMA_FMIN_HZ..=CHROMA_FMAX_HZ)
                .contains(&f)
                .then(|| (k, pitch_class(f)))
        })
        .collect();
    frames
        .spectra
        .iter()
        .map(|spec| {
            let mut c = [0.0; 12];
            for &(k, pc) in &bins {
                c[pc] += spec[k] * spec[k];
            }
            let total: f64 = c.iter().sum();
            if total > 0.0 {
                c.iter_mut().for_each(|v| *v /= total);
            }
            c
        })
        .collect()
}

pub fn mean_chroma(chroma: &[[f64; 12]]) -> [f64; 12] {
    let mut m = [0.0; 12];
    if chroma.is_empty() {
        return m;
    }
    for c in chroma {
        for (a, b) in m.iter_mut().zip(c) {
            *a += b;
        }
    }
    m.map(|v| v / chroma.len() as f64)
}

/// `profile` transposed so its tonic sits on pitch class `tonic`.
pub fn rotate_profile(profile: &[f64; 12], tonic: usize) -> [f64; 12] {
    core::array::from_fn(|pc| profile[(pc + 12 - tonic) % 12])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyEstimate {
    /// Highest correlation over the 24 key profiles.
    pub key_clarity: f64,
    /// Best major correlation minus best minor correlation.
    pub mode: f64,
    pub tonic: usize,
    pub major: bool,
    /// Set when the chroma has no variance; clarity and mode are then 0.
    pub flat_chroma: bool,
}

pub fn key_clarity_mode(chroma: &[f64; 12]) -> KeyEstimate {
    let flat = KeyEstimate {
        key_clarity: 0.0,
        mode: 0.0,
        tonic: 0,
        major: true,
        flat_chroma: true,
    };
    let mut best_major = (f64::NEG_INFINITY, 0);
    let mut best_minor = (f64::NEG_INFINITY, 0);
    for tonic in 0..12 {
        let Some(rmaj) = stats::pearson(chroma, &rotate_profile(&MAJOR_PROFILE, tonic)) else {
            return flat;
        };
        let Some(rmin) = stats::pearson(chroma, &rotate_profile(&MINOR_PROFILE, tonic)) else {
            return flat;
        };
        if rmaj > best_major.0 {
            best_major = (rmaj, tonic);
        }
        if rmin > best_minor.0 {
            best_minor = (rmin, tonic);
        }
    }
    let major = best_major.0 >= best_minor.0;
    KeyEstimate {
        key_clarity: best_major.0.max(best_minor.0),
        mode: best_major.0 - best_minor.0,
        tonic: if major { best_major.1 } else { best_minor.1 },
        major,
        flat_chroma: false,
    }
}

/// 6-D tonal centroid: projections on the circles of fifths, minor thirds and
/// major thirds, weighted by the L1-normalized chroma.
pub fn tonal_centroid(chroma: &[f64; 12]) -> [f64; 6] {
    let total: f64 = chroma.iter().map(|v| v.abs()).sum();
    let mut z = [0.0; 6];
    if total <= 0.0 {
        return z;
    }
    let angles = [7.0 * PI / 6.0, 3.0 * PI / 2.0, 2.0 * PI / 3.0];
    for (l, &c) in chroma.iter().enumerate() {
        for (d, (&step, &r)) in angles.iter().zip(&CENTROID_RADII).enumerate() {
            let a = l as f64 * step;
            z[2 * d] += r * libm::sin(a) * c / total;
            z[2 * d + 1] += r * libm::cos(a) * c / total;
        }
    }
    z
}

/// Mean over interior frames of the distance between the centroids of the
/// previous and next frames; 0 with fewer than three frames.
pub fn hcdf_mean(chroma: &[[f64; 12]]) -> f64 {
    if chroma.len() < 3 {
        return 0.0;
    }
    let centroids: Vec<[f64; 6]> = chroma.iter().map(tonal_centroid).collect();
    let total: f64 = (1..centroids.len() - 1)
        .map(|t| {
            let (a, b) = (&centroids[t - 1], &centroids[t + 1]);
            libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
        })
        .sum();
    total / (centroids.len() - 2) as f64
}
