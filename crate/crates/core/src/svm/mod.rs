//! Binary soft-margin SVM with a Gaussian kernel, trained by SMO, and a
//! sigmoid calibration turning decision values into class probabilities.

mod calibration;
mod kernel;
mod smo;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use calibration::{
    fit_calibration, platt_objective, platt_targets, ProbabilityCalibration, MAX_SLOPE,
};
pub use kernel::{rbf_kernel, squared_distance};
pub use smo::{train_with_report, SolverReport, SUPPORT_THRESHOLD};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SvmError {
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("training set needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("rows must all have {expected} features (row {row} has {found})")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("labels must be +1 or -1 (index {0})")]
    InvalidLabel(usize),
    #[error("non-finite feature value at row {0}")]
    NonFinite(usize),
    #[error("label count {labels} does not match row count {rows}")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("invalid hyper-parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Feature rows with labels in `{+1, -1}`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    values: Vec<f64>,
    dim: usize,
    labels: Vec<f64>,
}

impl TrainingSet {
    pub fn new(rows: &[Vec<f64>], labels: &[f64]) -> Result<Self, SvmError> {
        if rows.len() != labels.len() {
            return Err(SvmError::LengthMismatch {
                rows: rows.len(),
                labels: labels.len(),
            });
        }
        if rows.len() < 2 {
            return Err(SvmError::TooFewPoints(rows.len()));
        }
        let dim = rows[0].len();
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(SvmError::DimensionMismatch {
                    row: i,
                    expected: dim,
                    found: r.len(),
                });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(SvmError::NonFinite(i));
            }
            values.extend_from_slice(r);
        }
        if let Some(i) = labels.iter().position(|&l| l != 1.0 && l != -1.0) {
            return Err(SvmError::InvalidLabel(i));
        }
        if !(labels.contains(&1.0) && labels.contains(&-1.0)) {
            return Err(SvmError::SingleClass);
        }
        Ok(Self {
            values,
            dim,
            labels: labels.to_vec(),
        })
    }

    /// `true` maps to +1.
    pub fn from_bools(rows: &[Vec<f64>], positive: &[bool]) -> Result<Self, SvmError> {
        let labels: Vec<f64> = positive.iter().map(|&p| if p { 1.0 } else { -1.0 }).collect();
        Self::new(rows, &labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub(crate) fn flat(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Box constraint.
    pub c: f64,
    /// Kernel scale `s` in `exp(-||u - v||^2 / s^2)`.
    pub kernel_scale: f64,
    /// Stop once the maximal KKT violation drops below this.
    pub tol: f64,
    pub seed: u64,
    /// Iteration cap; `None` means `100 n`.
    pub max_iter: Option<usize>,
    /// Keep the dual objective after each iteration in the solver report.
    pub record_trace: bool,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            kernel_scale: 3.0,
            tol: 1e-3,
            seed: 0,
            max_iter: None,
            record_trace: false,
        }
    }
}

impl SvmParams {
    fn validate(&self) -> Result<(), SvmError> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(SvmError::InvalidParameter("C must be positive"));
        }
        if !(self.kernel_scale > 0.0 && self.kernel_scale.is_finite()) {
            return Err(SvmError::InvalidParameter("kernel scale must be positive"));
        }
        if !(self.tol > 0.0) {
            return Err(SvmError::InvalidParameter("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Trained kernel machine. `dual_coef[i] = alpha_i * y_i` for each support vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support_vectors: Vec<Vec<f64>>,
    pub dual_coef: Vec<f64>,
    pub bias: f64,
    pub box_c: f64,
    pub kernel_scale: f64,
    pub seed: u64,
    pub iterations: usize,
    /// `false` when the iteration cap was reached first.
    pub converged: bool,
}

impl SvmModel {
    /// `sum_i alpha_i y_i K(x_i, x) + b`; positive values favour class +1.
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coef)
            .map(|(sv, c)| c * rbf_kernel(sv, x, self.kernel_scale))
            .sum::<f64>()
            + self.bias
    }
}

pub fn train_svm(data: &TrainingSet, params: &SvmParams) -> Result<SvmModel, SvmError> {
    train_with_report(data, params).map(|(m, _)| m)
}

pub fn decision_value(model: &SvmModel, x: &[f64]) -> f64 {
    model.decision_value(x)
}

/// Probability of class +1.
pub fn predict_proba(model: &SvmModel, calibration: &ProbabilityCalibration, x: &[f64]) -> f64 {
    calibration.probability(model.decision_value(x))
}

/// An SVM together with the calibration fitted on its training decision values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classifier {
    pub model: SvmModel,
    pub calibration: ProbabilityCalibration,
}

impl Classifier {
    /// Trains the SVM, then fits the sigmoid on in-sample decision values.
    pub fn fit(data: &TrainingSet, params: &SvmParams) -> Result<Self, SvmError> {
        let model = train_svm(data, params)?;
        let decisions: Vec<f64> = (0..data.len()).map(|i| model.decision_value(data.row(i))).collect();
        let positive: Vec<bool> = data.labels().iter().map(|&l| l > 0.0).collect();
        let calibration = fit_calibration(&decisions, &positive)?;
        Ok(Self { model, calibration })
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        predict_proba(&self.model, &self.calibration, x)
    }
}
