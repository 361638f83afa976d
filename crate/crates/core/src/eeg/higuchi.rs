//! Higuchi fractal dimension.

use alloc::vec::Vec;

use super::EegError;

/// Mean normalized curve length `L(k)` for every delay `k = 1..=k_max`.
///
/// For offset `m` (1-based) the curve built from samples `m, m+k, m+2k, ...`
/// has length `sum |x(m+ik) - x(m+(i-1)k)| * (N-1) / (floor((N-m)/k) * k^2)`;
/// `L(k)` averages it over `m = 1..=k`.
pub fn curve_lengths(x: &[f64], k_max: usize) -> Result<Vec<f64>, EegError> {
    let n = x.len();
    if k_max < 2 {
        return Err(EegError::InvalidKmax(k_max));
    }
    if n < 2 * k_max {
        return Err(EegError::TooShort { len: n, k_max });
    }
    let norm = (n - 1) as f64;
    let mut lengths = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut total = 0.0;
        for m in 0..k {
            let steps = (n - 1 - m) / k;
            let mut sum = 0.0;
            let mut prev = x[m];
            let mut idx = m + k;
            for _ in 0..steps {
                let cur = x[idx];
                sum += (cur - prev).abs();
                prev = cur;
                idx += k;
            }
            total += sum * norm / (steps as f64 * (k * k) as f64);
        }
        lengths.push(total / k as f64);
    }
    Ok(lengths)
}

/// Slope of the least-squares line through `(ln(1/k), ln L(k))`, all delays weighted equally.
pub fn higuchi_fd(x: &[f64], k_max: usize) -> Result<f64, EegError> {
    let lengths = curve_lengths(x, k_max)?;
    if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(EegError::DegenerateSignal);
    }
    let pts: Vec<(f64, f64)> = lengths
        .iter()
        .enumerate()
        .map(|(i, &l)| (-libm::log((i + 1) as f64), libm::log(l)))
        .collect();
    let count = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(px, py) in &pts {
        sxy += (px - mx) * (py - my);
        sxx += (px - mx) * (px - mx);
    }
    Ok(sxy / sxx)
}
