//! Sequential minimal optimization for the soft-margin SVM dual.
//!
//! Minimizes `1/2 a'Qa - e'a` subject to `0 <= a_i <= C` and `y'a = 0`, with
//! `Q_ij = y_i y_j K(x_i, x_j)`. Each step updates the maximal violating pair
//! (first-order working-set selection) analytically.

use alloc::vec;
use alloc::vec::Vec;

use super::kernel::Gram;
use super::{SvmError, SvmModel, SvmParams, TrainingSet};
use crate::seed;

/// Smallest curvature used for a pair whose kernel rows coincide.
const TAU: f64 = 1e-12;
/// Multipliers at or below this value are not kept as support vectors.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Solver internals kept for verification.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    /// Final multiplier of every training point.
    pub alphas: Vec<f64>,
    /// Dual objective `e'a - 1/2 a'Qa` after each iteration, when recorded.
    pub objective_trace: Vec<f64>,
    /// Final `max(-yG over I_up) - min(-yG over I_low)`.
    pub violation: f64,
}

fn in_up(alpha: f64, y: f64, c: f64) -> bool {
    (y > 0.0 && alpha < c) || (y < 0.0 && alpha > 0.0)
}

fn in_low(alpha: f64, y: f64, c: f64) -> bool {
    (y > 0.0 && alpha > 0.0) || (y < 0.0 && alpha < c)
}

fn dual_objective(alpha: &[f64], grad: &[f64]) -> f64 {
    // grad = Qa - e, so a'Qa = a'(grad + e).
    -0.5 * alpha.iter().zip(grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>()
}

pub fn train_with_report(
    data: &TrainingSet,
    params: &SvmParams,
) -> Result<(SvmModel, SolverReport), SvmError> {
    params.validate()?;
    let n = data.len();
    let y = data.labels();
    if !(y.iter().any(|&v| v > 0.0) && y.iter().any(|&v| v < 0.0)) {
        return Err(SvmError::SingleClass);
    }
    let c = params.c;
    let gram = Gram::new(data.flat(), data.dim(), params.kernel_scale);
    let q = |i: usize, j: usize| y[i] * y[j] * gram.get(i, j);

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    seed::shuffle(&mut order, &mut seed::rng(params.seed));

    let cap = params.max_iter.unwrap_or(100 * n).max(1);
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut violation = f64::INFINITY;

    while iterations < cap {
        // Ties go to whichever index comes first in the seeded order.
        let (mut gmax, mut gmin) = (f64::NEG_INFINITY, f64::INFINITY);
        let (mut i, mut j) = (usize::MAX, usize::MAX);
        for &t in &order {
            let v = -y[t] * grad[t];
            if in_up(alpha[t], y[t], c) && v > gmax {
                gmax = v;
                i = t;
            }
            if in_low(alpha[t], y[t], c) && v < gmin {
                gmin = v;
                j = t;
            }
        }
        violation = gmax - gmin;
        if i == usize::MAX || j == usize::MAX || violation < params.tol {
            converged = true;
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let kij = gram.get(i, j);
        let quad = (gram.get(i, i) + gram.get(j, j) - 2.0 * kij).max(TAU);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
        if params.record_trace {
            trace.push(dual_objective(&alpha, &grad));
        }
    }

    let bias = -threshold(&alpha, &grad, y, c);
    let mut support_vectors = Vec::new();
    let mut dual_coef = Vec::new();
    for t in 0..n {
        if alpha[t] > SUPPORT_THRESHOLD {
            support_vectors.push(data.row(t).to_vec());
            dual_coef.push(alpha[t] * y[t]);
        }
    }
    let model = SvmModel {
        support_vectors,
        dual_coef,
        bias,
        box_c: c,
        kernel_scale: params.kernel_scale,
        seed: params.seed,
        iterations,
        converged,
    };
    Ok((
        model,
        SolverReport {
            alphas: alpha,
            objective_trace: trace,
            violation,
        },
    ))
}

/// The offset `rho` (decision bias is `-rho`): mean of `y G` over free
/// multipliers, else the midpoint of the feasible interval.
fn threshold(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum_free) = (0usize, 0.0);
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum_free += yg;
        }
    }
    if free > 0 {
        sum_free / free as f64
    } else {
        (ub + lb) / 2.0
    }
}
