//! Onset strength, tempo and attack descriptors.

use alloc::vec::Vec;

use super::frames::FrameSequence;
use super::MusicError;
use crate::stats;

pub const MIN_BPM: f64 = 40.0;
pub const MAX_BPM: f64 = 200.0;
/// Reported when a window has no usable onsets.
pub const NEUTRAL_BPM: f64 = 120.0;
/// Share of the peak autocorrelation the half lag needs to be preferred.
const OCTAVE_RATIO: f64 = 0.5;
/// Minimum window length for tempo estimation, seconds.
pub const MIN_TEMPO_WINDOW_S: f64 = 2.0;

/// Half-wave rectified spectral flux per frame; the first frame is 0.
pub fn onset_strength(frames: &FrameSequence) -> Vec<f64> {
    let mut out = Vec::with_capacity(frames.len());
    if frames.is_empty() {
        return out;
    }
    out.push(0.0);
    for pair in frames.spectra.windows(2) {
        out.push(
            pair[1]
                .iter()
                .zip(&pair[0])
                .map(|(cur, prev)| (cur - prev).max(0.0))
                .sum(),
        );
    }
    out
}

fn is_flat(curve: &[f64]) -> bool {
    let max = curve.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = curve.iter().cloned().fold(f64::INFINITY, f64::min);
    !(max - min > 1e-12 * (1.0 + max.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TempoEstimate {
    pub bpm: f64,
    /// Set when the onset curve was flat and `bpm` is the neutral value.
    pub no_onsets: bool,
}

/// Smooths with a 5-tap triangular kernel so that beat periods falling between
/// two integer lags still line up in the autocorrelation.
fn smooth(curve: &[f64]) -> Vec<f64> {
    const KERNEL: [f64; 5] = [1.0, 2.0, 3.0, 2.0, 1.0];
    let n = curve.len() as isize;
    (0..n)
        .map(|t| {
            let (mut acc, mut wsum) = (0.0, 0.0);
            for (j, w) in KERNEL.iter().enumerate() {
                let i = t + j as isize - 2;
                if (0..n).contains(&i) {
                    acc += w * curve[i as usize];
                    wsum += w;
                }
            }
            acc / wsum
        })
        .collect()
}

/// Biased autocorrelation of the mean-removed onset curve; the beat period is
/// the lag (refined by parabolic interpolation) with the largest value inside
/// the 40-200 BPM band, halved while the half lag keeps at least half of that
/// value.
pub fn tempo_estimate(frames: &FrameSequence) -> Result<TempoEstimate, MusicError> {
    let covered = frames.len().saturating_sub(1) * frames.hop + frames.frame_len;
    let needed = libm::floor(MIN_TEMPO_WINDOW_S * frames.sample_rate_hz) as usize;
    // Frames only cover whole hops, so allow up to one hop of trailing samples.
    if frames.len() < 2 || covered + frames.hop <= needed {
        return Err(MusicError::TooShort {
            samples: covered,
            needed,
        });
    }
    let neutral = TempoEstimate {
        bpm: NEUTRAL_BPM,
        no_onsets: true,
    };
    let onset = onset_strength(frames);
    if is_flat(&onset) {
        return Ok(neutral);
    }
    let curve = smooth(&onset);
    let m = stats::mean(&curve);
    let c: Vec<f64> = curve.iter().map(|v| v - m).collect();
    let n = c.len();
    let fps = frames.frame_rate();
    let acf = |lag: usize| -> f64 {
        if lag >= n {
            return 0.0;
        }
        c[..n - lag].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum::<f64>() / n as f64
    };
    let min_lag = (libm::ceil(60.0 * fps / MAX_BPM) as usize).max(1);
    let max_lag = (libm::floor(60.0 * fps / MIN_BPM) as usize).min(n - 1);
    if min_lag > max_lag {
        return Err(MusicError::TooShort {
            samples: frames.len() * frames.hop,
            needed: min_lag * frames.hop,
        });
    }
    let strongest = |lo: usize, hi: usize| {
        (lo..=hi)
            .map(|l| (l, acf(l)))
            .fold((lo, f64::NEG_INFINITY), |acc, (l, r)| if r > acc.1 { (l, r) } else { acc })
    };
    let (mut best, mut best_r) = strongest(min_lag, max_lag);
    if !(best_r > 0.0) {
        return Ok(neutral);
    }
    // A beat period that falls between two integer lags spreads its peak over
    // both, so the lag of two beats can win. Step down while the half lag
    // still carries a comparable share of the correlation.
    loop {
        let half = best / 2;
        if half < min_lag.max(2) {
            break;
        }
        let (l, r) = strongest((half - 1).max(min_lag), (half + 1).min(max_lag));
        if r >= OCTAVE_RATIO * best_r {
            best = l;
            best_r = r;
        } else {
            break;
        }
    }
    let (left, right) = (acf(best - 1), acf(best + 1));
    let denom = left - 2.0 * best_r + right;
    let shift = if denom < 0.0 {
        (0.5 * (left - right) / denom).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let bpm = 60.0 * fps / (best as f64 + shift);
    Ok(TempoEstimate {
        bpm: bpm.clamp(MIN_BPM, MAX_BPM),
        no_onsets: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackEstimate {
    pub attack_time_s: f64,
    pub attack_slope: f64,
    pub no_onsets: bool,
}

/// Frames where the onset curve has a local maximum above mean + 1 std.
pub fn onset_frames(onset: &[f64]) -> Vec<usize> {
    if onset.len() < 2 || is_flat(onset) {
        return Vec::new();
    }
    let cut = stats::mean(onset) + stats::pop_std(onset);
    (1..onset.len())
        .filter(|&t| {
            let next_ok = t + 1 == onset.len() || onset[t] >= onset[t + 1];
            onset[t] > onset[t - 1] && next_ok && onset[t] > cut
        })
        .collect()
}

/// Relative rise below which neighbouring envelope frames count as a plateau.
const PLATEAU_TOLERANCE: f64 = 0.005;

/// Mean attack time and slope over detected onsets.
///
/// For each onset the RMS envelope is followed forward to its peak and back to
/// the last local minimum before it. A frame covers `frame_len` samples, so the
/// raw peak-to-minimum distance overstates the rise by the frame support: the
/// attack is taken to begin half a hop after the last quiet frame ends and to
/// finish half a hop before the peak frame starts.
pub fn attack_features(frames: &FrameSequence) -> AttackEstimate {
    let none = AttackEstimate {
        attack_time_s: 0.0,
        attack_slope: 0.0,
        no_onsets: true,
    };
    let env = &frames.rms;
    let onsets = onset_frames(&onset_strength(frames));
    if onsets.is_empty() {
        return none;
    }
    let hop = frames.hop as f64;
    let min_time = 0.5 * hop / frames.sample_rate_hz;
    let (mut times, mut slopes) = (Vec::new(), Vec::new());
    for &t in &onsets {
        let mut end = t.saturating_sub(1);
        while end + 1 < env.len() && env[end + 1] > env[end] * (1.0 + PLATEAU_TOLERANCE) {
            end += 1;
        }
        let mut start = end;
        while start > 0 && env[start - 1] < env[start] {
            start -= 1;
        }
        let rise = env[end] - env[start];
        if end == start || !(rise > 0.0) {
            continue;
        }
        let span = (end - start) as f64 * hop - frames.frame_len as f64 - hop;
        let time = (span / frames.sample_rate_hz).max(min_time);
        times.push(time);
        slopes.push(rise / time);
    }
    if times.is_empty() {
        return none;
    }
    AttackEstimate {
        attack_time_s: stats::mean(&times),
        attack_slope: stats::mean(&slopes),
        no_onsets: false,
    }
}
