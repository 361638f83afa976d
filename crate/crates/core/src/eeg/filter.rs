//! Zero-phase Butterworth band-pass.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use super::EegError;
use crate::dataset::MultichannelSignal;

/// Normalized biquad, `a0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    /// Second-order Butterworth low-pass (bilinear transform, prewarped at `cutoff`).
    pub fn lowpass(cutoff_hz: f64, rate_hz: f64) -> Self {
        let (cw, alpha) = Self::prototype(cutoff_hz, rate_hz);
        let a0 = 1.0 + alpha;
        let b1 = (1.0 - cw) / a0;
        Self {
            b: [b1 / 2.0, b1, b1 / 2.0],
            a: [-2.0 * cw / a0, (1.0 - alpha) / a0],
        }
    }

    /// Second-order Butterworth high-pass.
    pub fn highpass(cutoff_hz: f64, rate_hz: f64) -> Self {
        let (cw, alpha) = Self::prototype(cutoff_hz, rate_hz);
        let a0 = 1.0 + alpha;
        let b1 = (1.0 + cw) / a0;
        Self {
            b: [b1 / 2.0, -b1, b1 / 2.0],
            a: [-2.0 * cw / a0, (1.0 - alpha) / a0],
        }
    }

    fn prototype(cutoff_hz: f64, rate_hz: f64) -> (f64, f64) {
        let w0 = 2.0 * PI * cutoff_hz / rate_hz;
        // Q = 1/sqrt(2) gives the maximally flat response.
        (libm::cos(w0), libm::sin(w0) / SQRT_2)
    }

    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }

    /// Transposed direct form II, starting from the steady state for a constant input `x[0]`.
    fn run(&self, x: &mut [f64]) {
        let Some(&x0) = x.first() else { return };
        let h = self.dc_gain();
        let mut z2 = (self.b[2] - self.a[1] * h) * x0;
        let mut z1 = (self.b[1] - self.a[0] * h) * x0 + z2;
        for v in x.iter_mut() {
            let input = *v;
            let y = self.b[0] * input + z1;
            z1 = self.b[1] * input - self.a[0] * y + z2;
            z2 = self.b[2] * input - self.a[1] * y;
            *v = y;
        }
    }
}

/// High-pass at `low_hz` cascaded with low-pass at `high_hz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPass {
    pub sections: [Biquad; 2],
}

impl BandPass {
    pub fn new(low_hz: f64, high_hz: f64, rate_hz: f64) -> Result<Self, EegError> {
        if !(low_hz > 0.0 && low_hz < high_hz && high_hz < rate_hz / 2.0) {
            return Err(EegError::InvalidBand { low_hz, high_hz });
        }
        Ok(Self {
            sections: [
                Biquad::highpass(low_hz, rate_hz),
                Biquad::lowpass(high_hz, rate_hz),
            ],
        })
    }

    /// Forward-backward filtering with odd reflection padding at both ends.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        if n < 2 {
            return x.to_vec();
        }
        let pad = 15.min(n - 1);
        let mut buf = Vec::with_capacity(n + 2 * pad);
        buf.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        buf.extend_from_slice(x);
        buf.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));
        for s in &self.sections {
            s.run(&mut buf);
        }
        buf.reverse();
        for s in &self.sections {
            s.run(&mut buf);
        }
        buf.reverse();
        buf[pad..pad + n].to_vec()
    }
}

/// Zero-phase band-pass applied to each channel; length is preserved.
pub fn bandpass_filter(
    signal: &MultichannelSignal,
    low_hz: f64,
    high_hz: f64,
) -> Result<MultichannelSignal, EegError> {
    let bp = BandPass::new(low_hz, high_hz, signal.sample_rate_hz())?;
    Ok(signal.map_channels(|c| bp.filtfilt(c)))
}
