//! Sigmoid (Platt) calibration of SVM decision values.

use serde::{Deserialize, Serialize};

use super::SvmError;

/// Maps a decision value `f` to `P(class +1) = 1 / (1 + exp(A f + B))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityCalibration {
    pub a: f64,
    pub b: f64,
    /// Set when the fitted slope was not negative and had to be clamped.
    pub clamped: bool,
}

/// Largest slope allowed; keeps probabilities increasing in the decision value.
pub const MAX_SLOPE: f64 = -1e-6;
const MAX_NEWTON_STEPS: usize = 100;
const MIN_STEP: f64 = 1e-10;
const SIGMA: f64 = 1e-12;
const GRAD_EPS: f64 = 1e-5;

impl ProbabilityCalibration {
    pub fn probability(&self, decision: f64) -> f64 {
        let z = self.a * decision + self.b;
        let p = if z >= 0.0 {
            let e = libm::exp(-z);
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + libm::exp(z))
        };
        p.clamp(0.0, 1.0)
    }
}

/// Regularized cross-entropy minimized by the fit (smaller is better).
pub fn platt_objective(decisions: &[f64], targets: &[f64], a: f64, b: f64) -> f64 {
    decisions
        .iter()
        .zip(targets)
        .map(|(&f, &t)| {
            let z = f * a + b;
            if z >= 0.0 {
                t * z + libm::log1p(libm::exp(-z))
            } else {
                (t - 1.0) * z + libm::log1p(libm::exp(z))
            }
        })
        .sum()
}

/// Smoothed targets `(N+ + 1)/(N+ + 2)` and `1/(N- + 2)`.
pub fn platt_targets(positive: &[bool]) -> alloc::vec::Vec<f64> {
    let pos = positive.iter().filter(|&&p| p).count() as f64;
    let neg = positive.len() as f64 - pos;
    let hi = (pos + 1.0) / (pos + 2.0);
    let lo = 1.0 / (neg + 2.0);
    positive.iter().map(|&p| if p { hi } else { lo }).collect()
}

/// Newton iterations with backtracking line search on the Platt objective.
pub fn fit_calibration(decisions: &[f64], positive: &[bool]) -> Result<ProbabilityCalibration, SvmError> {
    assert_eq!(decisions.len(), positive.len(), "one label per decision value");
    let pos = positive.iter().filter(|&&p| p).count();
    let neg = positive.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(SvmError::SingleClass);
    }
    let targets = platt_targets(positive);
    let mut a = 0.0;
    let mut b = libm::log((neg as f64 + 1.0) / (pos as f64 + 1.0));
    let mut fval = platt_objective(decisions, &targets, a, b);

    for _ in 0..MAX_NEWTON_STEPS {
        let (mut h11, mut h22, mut h21, mut g1, mut g2) = (SIGMA, SIGMA, 0.0, 0.0, 0.0);
        for (&f, &t) in decisions.iter().zip(&targets) {
            let z = f * a + b;
            let (p, q) = if z >= 0.0 {
                let e = libm::exp(-z);
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = libm::exp(z);
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += f * f * d2;
            h22 += d2;
            h21 += f * d2;
            let d1 = t - p;
            g1 += f * d1;
            g2 += d1;
        }
        if g1.abs() < GRAD_EPS && g2.abs() < GRAD_EPS {
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut step = 1.0;
        while step >= MIN_STEP {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = platt_objective(decisions, &targets, na, nb);
            if nf < fval + 1e-4 * step * gd {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if step < MIN_STEP {
            break;
        }
    }
    let clamped = !(a <= MAX_SLOPE);
    Ok(ProbabilityCalibration {
        a: if clamped { MAX_SLOPE } else { a },
        b,
        clamped,
    })
}
